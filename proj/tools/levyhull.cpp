// levyhull: run verification experiments from a JSON config.
//
//   levyhull run configs/example.json --out results/
//   levyhull smoke
//   levyhull list-experiments

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "levyhull/errors.hpp"
#include "levyhull/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int execute(std::vector<levyhull::ExperimentConfig> configs, const std::string& out,
            std::optional<std::uint64_t> seed, const levyhull::ExecOptions& opts) {
  if (seed) {
    for (auto& c : configs) c.master_seed = *seed;
  }
  const auto start = std::chrono::steady_clock::now();
  const levyhull::RunManifest m = levyhull::run_all(configs, out, opts);
  levyhull::emit_plot_data(m, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& r : m.rows) {
    const auto& e = r.estimate;
    std::printf("%-28s j=%d mean=%.6g stderr=%.3g", r.experiment.c_str(), r.j, e.mean, e.std_error);
    if (e.target) std::printf(" target=%.6g", e.target->value);
    if (e.z_score) std::printf(" z=%+.2f", *e.z_score);
    std::printf("  %s\n", std::string(levyhull::to_string(r.verdict)).c_str());
  }
  std::printf("run %s: %zu rows, digest %s, %.1f s -> %s\n", m.run_id.c_str(), m.rows.size(),
              m.config_digest.c_str(), secs, out.c_str());
  return m.exit_status();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification of convex-hull functionals of Levy processes"};
  app.require_subcommand(1);

  std::string out = "levyhull_out";
  unsigned threads = 0;
  std::string dump_dir;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Override master_seed of every experiment");
    sub->add_option("--threads", threads, "Worker threads (LEVYHULL_THREADS overrides)");
    sub->add_option("--dump-polytopes", dump_dir, "Write hull JSON of the first trials to this directory");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiments in a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  add_common(run);

  auto* smoke = app.add_subcommand("smoke", "Run a small suite covering every experiment kind");
  add_common(smoke);

  auto* list = app.add_subcommand("list-experiments", "List experiment kinds");

  CLI11_PARSE(app, argc, argv);

  levyhull::ExecOptions opts;
  opts.threads = threads;
  opts.dump_dir = dump_dir;

  try {
    if (*list) {
      for (auto k : levyhull::all_experiment_kinds()) std::cout << levyhull::to_string(k) << '\n';
      return 0;
    }
    if (*run) return execute(levyhull::load_config(config_path), out, seed, opts);
    return execute(levyhull::smoke_suite(), out, seed, opts);
  } catch (const levyhull::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const levyhull::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::logic_error& e) {  // ParameterError, DomainError
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const levyhull::ResourceError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
