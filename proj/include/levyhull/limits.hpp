#pragma once

// Exit-time splitting of paths, renewal counts, and the scaled-hull and
// exit-value limit experiments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "levyhull/stable.hpp"
#include "levyhull/stats.hpp"

namespace levyhull {

/// T_1 < T_2 < ... with T_i the first exit from the closed unit ball around
/// X(T_{i-1}) (X(T_0) = 0), and the exit positions X(T_i).
struct ExitRecord {
  std::vector<double> exit_times;
  Eigen::MatrixXd exit_points;  // d x count
  double horizon = 0.0;

  std::size_t count() const { return exit_times.size(); }
  /// N_s: number of exits at or before s.
  std::size_t count_until(double s) const;
};

enum class ExitScan {
  Grid,        // first recorded point outside the ball
  Continuous,  // exact crossing of the piecewise-linear path, exact at jumps
};

ExitRecord exit_times(const PathSample& path, ExitScan mode = ExitScan::Grid);

/// First exit of a process started at 0. Brownian/isotropic specs are scanned
/// on the grid k*dt; compound Poisson specs are simulated event by event and
/// the crossing is exact. Empty if no exit happens before max_time.
struct FirstExit {
  double time = 0.0;
  Eigen::VectorXd point;
};
std::optional<FirstExit> sample_first_exit(const StableSpec& spec, Rng& rng, double dt = 0.01,
                                           double max_time = 1e6);

struct RenewalPoint {
  double t = 0.0;
  EstimateResult ratio;  // N_t / t
  double gap = 0.0;      // |mean - 1/E T_1| / (1/E T_1)
};

struct RenewalResult {
  EstimateResult mean_exit_time;  // independent first-exit batch
  double rate = 0.0;              // 1 / mean_exit_time
  double rate_std_error = 0.0;
  std::vector<RenewalPoint> points;
  bool gap_decreasing = false;
};

/// Trials at time t: max(200, min(trials, trials * 100 / t)), so the cost per
/// time point stays bounded; batch_trials first exits estimate E T_1.
RenewalResult renewal_ratio_experiment(const StableSpec& spec, const std::vector<double>& t_values,
                                       std::size_t trials, std::uint64_t seed, double dt = 0.01,
                                       std::size_t batch_trials = 0, unsigned threads = 0);

struct ScaledHullPoint {
  double t = 0.0;
  KsResult ks;
  double mean_scaled = 0.0;
};

struct ScaledHullResult {
  double fitted_c = 0.0;      // scale of the isotropic limit, E e^{i<Y(1),u>} = e^{-c|u|^alpha}
  double mean_exit_time = 0.0;
  double mean_limit = 0.0;
  std::vector<ScaledHullPoint> points;
  bool ks_decreasing = false;  // last KS statistic below the first
};

/// KS distance between V_1(t^{-1/alpha} Z_t) and V_1 of the hull of an
/// isotropic alpha-stable walk run to time 1/E T_1, for each t. The limit
/// scale is fitted by matching medians of |<block sum of X(T_1), e_1>|.
ScaledHullResult scaled_hull_convergence(const StableSpec& spec, const std::vector<double>& t_values,
                                         std::size_t trials, std::uint64_t seed, unsigned threads = 0);

struct ExitTailResult {
  TailProbe probe;
  bool degenerate = false;  // all |X(T_1)| equal, no tail to estimate
  std::size_t samples = 0;
};

/// Hill index of |X(T_1)| over trials independent first exits.
ExitTailResult exit_value_tail_experiment(const StableSpec& spec, std::size_t trials, std::uint64_t seed,
                                          std::size_t hill_k = 0, unsigned threads = 0);

struct ContinuityCheck {
  double hausdorff = 0.0;
  double sup_distance = 0.0;
  bool holds = false;  // hausdorff <= sup_distance + eps
};

/// Hausdorff distance of the hulls of two paths on a common time grid
/// against the uniform distance of the paths.
ContinuityCheck hull_range_continuity_check(const PathSample& a, const PathSample& b);

}  // namespace levyhull
