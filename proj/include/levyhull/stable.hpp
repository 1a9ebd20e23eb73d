#pragma once

// Seedable samplers for symmetric stable laws and discretized Levy paths.
//
// Every trial owns its generator. Generators are derived from
// (master_seed, stream, trial) so a run is reproducible no matter how
// trials are scheduled across threads.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace levyhull {

using Rng = std::mt19937_64;

/// Smallest admissible scale parameter.
inline constexpr double kMinScale = 1e-12;

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a hash of a stream name; used as the experiment id in seed derivation.
std::uint64_t stream_id(std::string_view name);

/// Counter-based per-trial seed: hash(master_seed, stream, trial).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t trial);

inline Rng trial_rng(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t trial) {
  return Rng(derive_seed(master_seed, stream, trial));
}

enum class Flavor { Isotropic, Brownian, CompoundPoissonHeavy };

/// Law of the jump vectors of a compound Poisson process. Pareto jumps have
/// norm U^{-1/tail_alpha} (minimum norm 1) and uniform direction; Gaussian
/// jumps are standard normal vectors (finite second moment).
enum class JumpLaw { Pareto, Gaussian };

struct CompoundPoissonParams {
  double tail_alpha = 1.5;
  double jump_rate = 1.0;
  std::vector<double> drift;  // empty means zero drift
  JumpLaw jump_law = JumpLaw::Pareto;
};

/// Distributional parameters of the driving process.
///
/// Isotropic and Brownian flavors have characteristic function
/// E exp{i<X(t),u>} = exp{-t c |u|^alpha}; standard Brownian motion is c = 1/2.
/// For CompoundPoissonHeavy, `alpha` mirrors the jump tail index (2 for
/// Gaussian jumps) and `c` is unused.
struct StableSpec {
  double alpha = 2.0;
  double c = 0.5;
  int d = 2;
  Flavor flavor = Flavor::Brownian;
  CompoundPoissonParams cpp;

  static StableSpec brownian(int d, double c = 0.5);
  static StableSpec isotropic(double alpha, double c, int d);
  static StableSpec compound_poisson(int d, double tail_alpha, double jump_rate,
                                     std::vector<double> drift = {},
                                     JumpLaw law = JumpLaw::Pareto);

  /// Throws ParameterError when an invariant is violated.
  void validate() const;

  bool is_stable() const { return flavor != Flavor::CompoundPoissonHeavy; }
};

/// One discretized path. `points` is d x len; column i is X(times[i]).
///
/// Walk paths have strictly increasing times. Compound Poisson paths record
/// the left limit and the post-jump value at each jump time, so two
/// consecutive entries may share a time stamp; between distinct time stamps
/// the path is linear (drift).
struct PathSample {
  std::vector<double> times;
  Eigen::MatrixXd points;

  int dim() const { return static_cast<int>(points.rows()); }
  std::size_t size() const { return times.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
};

/// Symmetric alpha-stable scalar with E exp{isR} = exp{-scale^alpha |s|^alpha}
/// (Chambers-Mallows-Stuck). alpha = 2 returns scale*sqrt(2)*N(0,1).
double sample_stable_1d(double alpha, double scale, Rng& rng);

/// Positive (a)-stable draw with Laplace transform E exp{-lambda S} = exp{-lambda^a},
/// 0 < a < 1 (Kanter's representation).
double sample_positive_stable(double a, Rng& rng);

/// Isotropic stable vector with characteristic function exp{-c |u|^alpha},
/// via X = sqrt(2A) G with A positive (alpha/2)-stable and G standard Gaussian.
Eigen::VectorXd sample_isotropic_stable_vec(const StableSpec& spec, Rng& rng);

/// Draws i.i.d. increments dt^{1/alpha} X(1) for Isotropic/Brownian specs.
class IncrementSampler {
 public:
  IncrementSampler(const StableSpec& spec, double dt);

  /// Writes one d-dimensional increment to out[0..d).
  void next(Rng& rng, double* out);

  int dim() const { return d_; }

 private:
  int d_;
  double alpha_;
  double gauss_scale_;       // sqrt(2 c^{2/alpha}) * dt^{1/alpha}
  bool gaussian_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Random walk embedded in the process on the grid i*horizon/n, i = 0..n.
PathSample sample_walk_path(const StableSpec& spec, std::size_t n, double horizon, Rng& rng);

/// Compound Poisson path with drift on [0, horizon].
PathSample sample_cpp_path(const StableSpec& spec, double horizon, Rng& rng);

/// One jump vector of a compound Poisson spec.
void sample_cpp_jump(const StableSpec& spec, Rng& rng, double* out);

/// Evaluates a (piecewise linear, cadlag) path on the grid i*horizon/n.
PathSample resample_on_grid(const PathSample& path, std::size_t n);

}  // namespace levyhull
