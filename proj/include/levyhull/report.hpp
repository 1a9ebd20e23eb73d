#pragma once

// Config ingestion, orchestration and result files (results.csv,
// summary.json, manifest.json, plot series).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "levyhull/experiments.hpp"

namespace levyhull {

/// Parses the {"experiments": [...]} document. Unknown keys, malformed JSON
/// (reported with its line) and invalid values raise ConfigError.
std::vector<ExperimentConfig> parse_config(const std::string& text);

/// Reads and parses a config file; a missing file is an IoError.
std::vector<ExperimentConfig> load_config(const std::string& path);

/// Fully resolved (defaults filled) JSON form of a config; parse_config
/// accepts it back unchanged.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON of the resolved configs, as 16 hex digits.
std::string config_digest(const std::vector<ExperimentConfig>& configs);

/// Small configurations of every experiment kind (200 trials where the kind
/// allows), for a quick end-to-end check.
std::vector<ExperimentConfig> smoke_suite();

struct RunManifest {
  std::string run_id;
  std::string timestamp;  // UTC, ISO 8601
  std::string config_digest;
  nlohmann::json config = nlohmann::json::array();
  std::vector<ResultRow> rows;
  std::vector<Series> series;
  std::map<std::string, Verdict> verdicts;  // per experiment label

  /// 0 when no verdict is FAIL, 1 otherwise.
  int exit_status() const;
};

/// Runs every config, writes results.csv, summary.json and manifest.json to
/// out_dir and returns the manifest. Unwritable out_dir is an IoError.
RunManifest run_all(const std::vector<ExperimentConfig>& configs, const std::string& out_dir,
                    const ExecOptions& opts = {});

/// Writes series_<label>_j<j>.csv (n,mean,stderr,target) for every series and
/// returns the file paths.
std::vector<std::string> emit_plot_data(const RunManifest& manifest, const std::string& out_dir);

/// %.17g, so values round-trip exactly.
std::string format_double(double x);

/// RFC 4180 quoting: fields containing comma, quote or newline are quoted
/// and embedded quotes doubled.
std::string csv_field(const std::string& s);

inline constexpr const char* kResultsHeader = "experiment,param_json,j,mean,stderr,trials,target,z,verdict";

std::string results_csv(const std::vector<ResultRow>& rows);

}  // namespace levyhull
