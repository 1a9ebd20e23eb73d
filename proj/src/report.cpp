#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levyhull/errors.hpp"
#include "levyhull/report.hpp"

namespace levyhull {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json row_json(const ResultRow& r) {
  json j;
  j["experiment"] = r.experiment;
  j["params"] = r.params;
  j["j"] = r.j;
  j["mean"] = r.estimate.mean;
  j["stderr"] = r.estimate.std_error;
  j["trials"] = r.estimate.trials;
  j["seed"] = r.estimate.seed;
  j["target"] = r.estimate.target ? json(r.estimate.target->value) : json(nullptr);
  if (r.estimate.target) j["target_name"] = r.estimate.target->name;
  j["z"] = number_or_null(r.estimate.z_score);
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_' || ch == '.';
    out.push_back(ok ? ch : '_');
  }
  return out;
}

}  // namespace

int RunManifest::exit_status() const {
  for (const auto& [name, v] : verdicts) {
    if (v == Verdict::Fail) return 1;
  }
  return 0;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += '"';
  return out;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const ResultRow& r : rows) {
    const EstimateResult& e = r.estimate;
    out += csv_field(r.experiment) + ',' + csv_field(r.params.dump()) + ',' + std::to_string(r.j) + ',' +
           format_double(e.mean) + ',' + format_double(e.std_error) + ',' + std::to_string(e.trials) + ',' +
           (e.target ? format_double(e.target->value) : std::string()) + ',' +
           (e.z_score ? format_double(*e.z_score) : std::string()) + ',' + std::string(to_string(r.verdict)) + '\n';
  }
  return out;
}

RunManifest run_all(const std::vector<ExperimentConfig>& configs, const std::string& out_dir, const ExecOptions& opts) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir);
  // Fail before spending compute if the directory is not writable.
  write_file(fs::path(out_dir) / "results.csv", std::string(kResultsHeader) + "\n");

  RunManifest m;
  m.timestamp = utc_timestamp();
  m.config_digest = config_digest(configs);
  std::string compact = m.timestamp;
  std::erase(compact, '-');
  std::erase(compact, ':');
  m.run_id = "run-" + compact + "-" + m.config_digest.substr(0, 8);
  for (const auto& c : configs) m.config.push_back(config_to_json(c));

  for (const auto& c : configs) {
    ExperimentOutcome o = run_experiment(c, opts);
    Verdict v = Verdict::Info;
    for (const auto& r : o.rows) {
      if (r.verdict == Verdict::Fail) v = Verdict::Fail;
      else if (r.verdict == Verdict::Pass && v == Verdict::Info) v = Verdict::Pass;
    }
    const auto [it, inserted] = m.verdicts.try_emplace(c.name(), v);
    if (!inserted && v == Verdict::Fail) it->second = Verdict::Fail;
    else if (!inserted && v == Verdict::Pass && it->second == Verdict::Info) it->second = Verdict::Pass;
    for (auto& r : o.rows) m.rows.push_back(std::move(r));
    for (auto& s : o.series) m.series.push_back(std::move(s));
  }

  const fs::path dir(out_dir);
  write_file(dir / "results.csv", results_csv(m.rows));

  json summary;
  summary["config_digest"] = m.config_digest;
  summary["overall"] = m.exit_status() == 0 ? "PASS" : "FAIL";
  json exps = json::object();
  for (const auto& [name, v] : m.verdicts) exps[name]["verdict"] = std::string(to_string(v));
  for (const auto& r : m.rows) exps[r.experiment]["rows"].push_back(row_json(r));
  summary["experiments"] = exps;
  write_file(dir / "summary.json", summary.dump(2) + "\n");

  json manifest;
  manifest["run_id"] = m.run_id;
  manifest["timestamp"] = m.timestamp;
  manifest["config_digest"] = m.config_digest;
  manifest["config"] = m.config;
  manifest["results"] = json::array();
  for (const auto& r : m.rows) manifest["results"].push_back(row_json(r));
  json verdicts = json::object();
  for (const auto& [name, v] : m.verdicts) verdicts[name] = std::string(to_string(v));
  manifest["verdicts"] = verdicts;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return m;
}

std::vector<std::string> emit_plot_data(const RunManifest& manifest, const std::string& out_dir) {
  std::vector<std::string> files;
  if (manifest.series.empty()) return files;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  for (const Series& s : manifest.series) {
    const fs::path path = fs::path(out_dir) / ("series_" + sanitize(s.experiment) + "_j" + std::to_string(s.j) + ".csv");
    std::string body = "n,mean,stderr,target\n";
    for (const SeriesPoint& p : s.points) {
      body += format_double(p.n) + ',' + format_double(p.mean) + ',' + format_double(p.std_error) + ',' +
              (p.target ? format_double(*p.target) : std::string()) + '\n';
    }
    write_file(path, body);
    files.push_back(path.string());
  }
  return files;
}

}  // namespace levyhull
