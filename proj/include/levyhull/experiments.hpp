#pragma once

// Monte Carlo experiments comparing hull functionals of sampled paths with
// their closed-form expectations.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "levyhull/hull.hpp"
#include "levyhull/stable.hpp"
#include "levyhull/stats.hpp"

namespace levyhull {

enum class ExperimentKind {
  IntrinsicVolumes,
  GramDeterminant,
  BoundaryOrigin,
  InteriorEndpoint,
  TailIndex,
  FacesCount,
  LpBrownian,
  LpStableConsistency,
  Renewal,
  ScaledHull,
  ExitTail,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
const std::vector<ExperimentKind>& all_experiment_kinds();

/// One verification experiment. Fields not used by an experiment kind are
/// ignored; zero-valued optional sizes fall back to per-kind defaults.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::IntrinsicVolumes;
  std::string label;  // defaults to the kind name
  StableSpec spec;
  std::size_t n_steps = 10'000;
  std::size_t trials = 10'000;
  std::vector<int> j_orders;  // empty: 1..d
  double horizon = 1.0;
  std::uint64_t master_seed = 20240611;
  double tolerance_sigma = 4.0;
  /// Relative band accepted on top of tolerance_sigma (one-sided
  /// discretization bias). Defaults: 2% for alpha = 2, 3% otherwise.
  std::optional<double> bias_allowance;
  std::vector<std::size_t> n_values;  // sweeps over step counts
  std::vector<double> p_values;       // L_p orders
  std::vector<double> t_values;       // renewal / scaled-hull times
  std::size_t hill_k = 0;             // 0: floor(trials^0.6)
  double tail_target = 0.0;           // 0: spec.alpha (or cpp.tail_alpha)
  double tail_band = 0.3;
  std::size_t grid_n = 0;       // sup grid for stable L_p; 0: n_steps
  std::size_t quad_points = 4096;
  std::size_t sup_trials = 0;   // 0: trials
  double dt = 0.01;             // exit-time scan grid for continuous processes
  std::size_t batch_trials = 0; // independent first-exit batch; 0: 100 * trials

  std::string name() const;
  std::vector<int> orders() const;
  double band() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct ExecOptions {
  unsigned threads = 0;
  std::string dump_dir;  // non-empty: write hull JSON of the first trials here
  std::size_t dump_count = 3;
};

enum class Verdict { Pass, Fail, Info };
std::string_view to_string(Verdict v);

/// One row of results.csv.
struct ResultRow {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  int j = 0;
  EstimateResult estimate;
  Verdict verdict = Verdict::Info;
};

struct SeriesPoint {
  double n = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::optional<double> target;
};

/// Plot-ready series, e.g. E V_j(C_n) against n.
struct Series {
  std::string experiment;
  int j = 0;
  std::vector<SeriesPoint> points;
};

struct ExperimentOutcome {
  std::vector<ResultRow> rows;
  std::vector<Series> series;
};

/// PASS if |z| <= tolerance_sigma or |relative error| <= band.
Verdict closed_form_verdict(const EstimateResult& e, double tolerance_sigma, double band);

/// Per trial: walk path, hull, intrinsic volumes. One estimate per order j,
/// target E V_j(Z) s^{j/alpha}.
std::vector<EstimateResult> run_intrinsic_volume_experiment(const ExperimentConfig& cfg,
                                                            const ExecOptions& opts = {});

enum class GramLaw { StandardGaussian };

/// E sqrt(det M^T M) for d x j matrices with i.i.d. N(0,1) entries, against
/// j! V_j((2 pi)^{-1/2} B^d).
EstimateResult run_gram_experiment(int d, int j, GramLaw law, std::size_t trials, std::uint64_t seed,
                                   unsigned threads = 0);

struct BoundaryResult {
  EstimateResult freq;
  double eyn_bound = 0.0;  // E Y_n, an upper bound for P{0 on the boundary}
};

/// Frequency of 0 on the boundary of conv{0, S_1, ..., S_n} (d = 2).
BoundaryResult run_boundary_origin_experiment(const ExperimentConfig& cfg, const ExecOptions& opts = {});

/// Frequency of S_n in the interior of conv{0, S_1, ..., S_n}.
EstimateResult run_interior_endpoint_experiment(const ExperimentConfig& cfg, const ExecOptions& opts = {});

/// Mean number of hull facets containing the origin, against expected_faces_Yn.
EstimateResult run_faces_count_experiment(const ExperimentConfig& cfg, const ExecOptions& opts = {});

/// Hill index of V_j(Z) samples (j = first order), with the k/4, 4k profile.
TailProbe run_tail_index_experiment(const ExperimentConfig& cfg, const ExecOptions& opts = {});

/// Runs any experiment kind and assembles report rows and plot series.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const ExecOptions& opts = {});

}  // namespace levyhull
