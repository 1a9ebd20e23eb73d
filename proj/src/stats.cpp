#include "levyhull/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "levyhull/errors.hpp"

namespace levyhull {

void EstimateResult::attach_target(ClosedFormTarget t) {
  if (std_error > 0.0) {
    z_score = (mean - t.value) / std_error;
  } else {
    z_score.reset();
  }
  target = std::move(t);
}

double EstimateResult::relative_error() const {
  if (!target || target->value == 0.0) throw ParameterError("relative error needs a nonzero target");
  return (mean - target->value) / target->value;
}

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::std_error() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

EstimateResult RunningStats::to_estimate(std::uint64_t seed) const {
  EstimateResult r;
  r.mean = mean_;
  r.std_error = std_error();
  r.trials = n_;
  r.seed = seed;
  return r;
}

double hill_tail_index(std::span<const double> samples, std::size_t k) {
  if (k == 0 || k >= samples.size()) {
    throw ParameterError("Hill estimator needs 0 < k < number of samples");
  }
  for (double x : samples) {
    if (!(x > 0.0)) throw ParameterError("Hill estimator needs positive samples");
  }
  std::vector<double> top(samples.begin(), samples.end());
  // Top k+1 order statistics in descending order.
  std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k + 1), top.end(),
                    std::greater<>());
  const double log_threshold = std::log(top[k]);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i]) - log_threshold;
  if (sum <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(k) / sum;
}

std::size_t default_hill_k(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.6)));
}

TailProbe hill_stability(std::span<const double> samples, std::size_t k, double max_drift) {
  TailProbe p;
  p.k = k;
  p.index = hill_tail_index(samples, k);
  const std::size_t k_small = std::max<std::size_t>(k / 4, 10);
  const std::size_t k_large = std::min(4 * k, samples.size() - 1);
  p.index_small_k = hill_tail_index(samples, std::min(k_small, samples.size() - 1));
  p.index_large_k = hill_tail_index(samples, k_large);
  const double lo = std::min({p.index, p.index_small_k, p.index_large_k});
  const double hi = std::max({p.index, p.index_small_k, p.index_large_k});
  p.drift = (hi - lo) / p.index;
  p.heavy = std::isfinite(p.drift) && p.drift <= max_drift;
  return p;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

}  // namespace levyhull
