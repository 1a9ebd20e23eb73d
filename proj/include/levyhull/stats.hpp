#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace levyhull {

/// A closed-form value an estimate is compared against.
struct ClosedFormTarget {
  std::string name;
  std::map<std::string, double> params;
  double value = 0.0;
  std::string units = "dimensionless";
};

/// Monte Carlo point estimate. `std_error` is sample_std / sqrt(trials).
struct EstimateResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<ClosedFormTarget> target;
  std::optional<double> z_score;

  /// Attaches a target and sets z_score when std_error > 0.
  void attach_target(ClosedFormTarget t);

  /// (mean - target) / target; requires a nonzero target.
  double relative_error() const;
};

/// Welford accumulator with a deterministic pairwise merge.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased sample variance
  double std_error() const;

  EstimateResult to_estimate(std::uint64_t seed) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Hill estimator of the tail index from the top-k order statistics:
/// k / sum_{i<=k} log(X_(i) / X_(k+1)). Samples must be positive, k < size.
double hill_tail_index(std::span<const double> samples, std::size_t k);

/// Default number of upper order statistics, floor(n^0.6).
std::size_t default_hill_k(std::size_t n);

/// Hill index at k together with its values at k/4 and 4k. A regularly
/// varying tail gives a flat profile; light tails drift with k.
struct TailProbe {
  double index = 0.0;
  double index_small_k = 0.0;
  double index_large_k = 0.0;
  std::size_t k = 0;
  double drift = 0.0;  // relative spread across the three k values
  bool heavy = false;
};

TailProbe hill_stability(std::span<const double> samples, std::size_t k, double max_drift = 0.25);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace levyhull
