#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "levyhull/errors.hpp"
#include "levyhull/report.hpp"

using namespace levyhull;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("levyhull_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const char* kMinimal = R"({"experiments": [{"experiment": "IntrinsicVolumes", "spec": {"flavor": "Brownian", "d": 2}}]})";

std::string config_error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfgs = parse_config(kMinimal);
  REQUIRE(cfgs.size() == 1);
  CHECK(cfgs[0].trials == 10'000);
  CHECK(cfgs[0].n_steps == 10'000);
  CHECK(cfgs[0].tolerance_sigma == 4.0);
  CHECK(cfgs[0].spec.flavor == Flavor::Brownian);
  CHECK(cfgs[0].spec.c == 0.5);

  CHECK_FALSE(config_error_of(R"({"experiments": []})").empty());
  CHECK_FALSE(config_error_of(R"({"experiments": [{"experiment": "IntrinsicVolumes", "trails": 5}]})").empty());
  CHECK(config_error_of(R"({"experiments": [], "extra": 1})").find("extra") != std::string::npos);
  CHECK(config_error_of(R"({"experiments": [{"experiment": "Bogus"}]})").find("experiment") != std::string::npos);
  CHECK(config_error_of("{\n\"experiments\": [\n{,}\n]}").find("line 3") != std::string::npos);
  CHECK(config_error_of(R"({"experiments": [{"experiment": "LpStableConsistency",
      "spec": {"flavor": "Isotropic", "alpha": 1.5, "c": 1, "d": 2}, "p_values": [1.7]}]})")
            .find("p_values") != std::string::npos);
  CHECK(config_error_of(R"({"experiments": [{"experiment": "IntrinsicVolumes",
      "spec": {"flavor": "Isotropic", "alpha": 0.8, "d": 2}}]})")
            .find("alpha") != std::string::npos);
  CHECK(config_error_of(R"({"experiments": [{"experiment": "IntrinsicVolumes", "trials": "many"}]})")
            .find("trials") != std::string::npos);

  // Top-level seed applies unless an experiment overrides it.
  const auto seeded = parse_config(R"({"master_seed": 7, "experiments": [
      {"experiment": "GramDeterminant", "spec": {"d": 3}},
      {"experiment": "GramDeterminant", "spec": {"d": 3}, "master_seed": 9}]})");
  CHECK(seeded[0].master_seed == 7);
  CHECK(seeded[1].master_seed == 9);

  CHECK_THROWS_AS(load_config("/nonexistent/levyhull.json"), IoError);
}

TEST_CASE("resolved configs round-trip and digests are stable") {
  const auto suite = smoke_suite();
  nlohmann::json doc;
  for (const auto& c : suite) doc["experiments"].push_back(config_to_json(c));
  const auto back = parse_config(doc.dump());
  REQUIRE(back.size() == suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) CHECK(config_to_json(back[i]) == config_to_json(suite[i]));

  CHECK(config_digest(suite) == config_digest(back));
  CHECK(config_digest(suite).size() == 16);
  auto changed = suite;
  changed[0].trials += 1;
  CHECK(config_digest(changed) != config_digest(suite));
}

TEST_CASE("CSV formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  ResultRow r;
  r.experiment = "X";
  r.params = {{"a", 1}, {"b", "q"}};
  r.j = 2;
  r.estimate.mean = 1.5;
  r.estimate.std_error = 0.25;
  r.estimate.trials = 100;
  r.verdict = Verdict::Pass;
  const std::string csv = results_csv({r});
  CHECK(csv == std::string(kResultsHeader) + "\nX,\"{\"\"a\"\":1,\"\"b\"\":\"\"q\"\"}\",2,1.5,0.25,100,,,PASS\n");
}

TEST_CASE("run_all writes reproducible outputs") {
  const auto cfgs = parse_config(R"({"experiments": [
      {"experiment": "IntrinsicVolumes", "spec": {"flavor": "Brownian", "d": 2}, "n_steps": 100, "trials": 200, "bias_allowance": 0.3,
       "n_values": [10, 100]},
      {"experiment": "GramDeterminant", "spec": {"d": 2}, "trials": 1000, "j_orders": [1]}]})");
  const fs::path a = scratch("a"), b = scratch("b");
  const RunManifest ma = run_all(cfgs, a.string());
  const RunManifest mb = run_all(cfgs, b.string(), {3});
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
  CHECK(slurp(a / "results.csv").rfind(kResultsHeader, 0) == 0);
  CHECK(ma.config_digest == mb.config_digest);
  CHECK(ma.run_id.rfind("run-", 0) == 0);

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  for (const char* key : {"run_id", "timestamp", "config_digest", "config", "results", "verdicts"}) CHECK(manifest.contains(key));
  CHECK(manifest["verdicts"]["IntrinsicVolumes"] == "PASS");
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(summary["overall"] == "PASS");
  CHECK(ma.exit_status() == 0);

  const auto files = emit_plot_data(ma, (a / "plots").string());
  REQUIRE(files.size() == 2);
  CHECK(slurp(files[0]).rfind("n,mean,stderr,target\n", 0) == 0);
  CHECK(emit_plot_data(RunManifest{}, (a / "none").string()).empty());
  CHECK_FALSE(fs::exists(a / "none"));

  // A target checked at zero tolerance fails and sets the exit status.
  const auto strict = parse_config(R"({"experiments": [{"experiment": "GramDeterminant", "spec": {"d": 2},
      "trials": 1000, "tolerance_sigma": 0}]})");
  CHECK(run_all(strict, scratch("c").string()).exit_status() == 1);

  CHECK_THROWS_AS(run_all(cfgs, "/proc/levyhull_cannot_write"), IoError);
  fs::remove_all(a);
  fs::remove_all(b);
}
