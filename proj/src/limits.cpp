#include "levyhull/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levyhull/errors.hpp"
#include "levyhull/hull.hpp"
#include "levyhull/parallel.hpp"

namespace levyhull {

namespace {

// Smallest tau in [0, 1] with |a + tau b| = 1, given |a| <= 1 < |a + b|.
double crossing(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double bb = b.squaredNorm();
  const double ab = a.dot(b);
  const double c = a.squaredNorm() - 1.0;  // <= 0
  const double s = std::sqrt(std::max(0.0, ab * ab - bb * c));
  const double tau = ab >= 0.0 ? -c / (ab + s) : (s - ab) / bb;
  return std::clamp(tau, 0.0, 1.0);
}

void push_exit(std::vector<double>& times, std::vector<Eigen::VectorXd>& points, double t, const Eigen::VectorXd& x) {
  times.push_back(t);
  points.push_back(x);
}

double stable_index(const StableSpec& spec) {
  if (spec.flavor != Flavor::CompoundPoissonHeavy) return spec.alpha;
  return spec.cpp.jump_law == JumpLaw::Gaussian ? 2.0 : spec.cpp.tail_alpha;
}

Eigen::VectorXd drift_of(const StableSpec& spec) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(spec.d);
  for (std::size_t i = 0; i < spec.cpp.drift.size() && i < static_cast<std::size_t>(spec.d); ++i) {
    v[static_cast<Eigen::Index>(i)] = spec.cpp.drift[i];
  }
  return v;
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

}  // namespace

std::size_t ExitRecord::count_until(double s) const {
  return static_cast<std::size_t>(std::upper_bound(exit_times.begin(), exit_times.end(), s) - exit_times.begin());
}

ExitRecord exit_times(const PathSample& path, ExitScan mode) {
  if (path.size() == 0) throw ParameterError("exit_times needs a nonempty path");
  const int d = path.dim();
  std::vector<double> times;
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd anchor = path.points.col(0);

  if (mode == ExitScan::Grid) {
    for (Eigen::Index i = 1; i < path.points.cols(); ++i) {
      if ((path.points.col(i) - anchor).norm() > 1.0) {
        anchor = path.points.col(i);
        push_exit(times, points, path.times[static_cast<std::size_t>(i)], anchor);
      }
    }
  } else {
    Eigen::VectorXd cur = path.points.col(0);
    double tcur = path.times[0];
    for (Eigen::Index i = 1; i < path.points.cols(); ++i) {
      const Eigen::VectorXd next = path.points.col(i);
      const double tn = path.times[static_cast<std::size_t>(i)];
      if (tn == tcur) {  // jump
        if ((next - anchor).norm() > 1.0) {
          anchor = next;
          push_exit(times, points, tn, anchor);
        }
        cur = next;
        continue;
      }
      while ((next - anchor).norm() > 1.0) {
        const double tau = crossing(cur - anchor, next - cur);
        tcur += tau * (tn - tcur);
        cur += tau * (next - cur);
        anchor = cur;
        push_exit(times, points, tcur, anchor);
      }
      cur = next;
      tcur = tn;
    }
  }

  ExitRecord r;
  r.horizon = path.horizon();
  r.exit_times = std::move(times);
  r.exit_points.resize(d, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) r.exit_points.col(static_cast<Eigen::Index>(i)) = points[i];
  return r;
}

std::optional<FirstExit> sample_first_exit(const StableSpec& spec, Rng& rng, double dt, double max_time) {
  spec.validate();
  if (spec.flavor != Flavor::CompoundPoissonHeavy) {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    IncrementSampler inc(spec, dt);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.d);
    Eigen::VectorXd step(spec.d);
    for (std::size_t k = 1;; ++k) {
      const double t = static_cast<double>(k) * dt;
      if (t > max_time) return std::nullopt;
      inc.next(rng, step.data());
      x += step;
      if (x.squaredNorm() > 1.0) return FirstExit{t, x};
    }
  }

  const Eigen::VectorXd v = drift_of(spec);
  const double speed2 = v.squaredNorm();
  std::exponential_distribution<double> wait(spec.cpp.jump_rate > 0.0 ? spec.cpp.jump_rate : 1.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(spec.d);
  Eigen::VectorXd jump(spec.d);
  double t = 0.0;
  for (;;) {
    const double tau = spec.cpp.jump_rate > 0.0 ? wait(rng) : std::numeric_limits<double>::infinity();
    if (speed2 > 0.0) {
      // Exit along the drift ray x + s v before the next jump?
      const double ab = x.dot(v);
      const double c = x.squaredNorm() - 1.0;
      const double s = std::sqrt(std::max(0.0, ab * ab - speed2 * c));
      const double hit = ab >= 0.0 ? -c / (ab + s) : (s - ab) / speed2;
      if (hit <= tau) {
        if (t + hit > max_time) return std::nullopt;
        return FirstExit{t + hit, x + hit * v};
      }
      x += tau * v;
    }
    t += tau;
    if (t > max_time) return std::nullopt;
    sample_cpp_jump(spec, rng, jump.data());
    x += jump;
    if (x.squaredNorm() > 1.0) return FirstExit{t, x};
  }
}

RenewalResult renewal_ratio_experiment(const StableSpec& spec, const std::vector<double>& t_values,
                                       std::size_t trials, std::uint64_t seed, double dt, std::size_t batch_trials,
                                       unsigned threads) {
  spec.validate();
  if (t_values.empty()) throw ParameterError("renewal experiment needs t values");
  if (trials < 2) throw ParameterError("renewal experiment needs at least 2 trials");
  if (batch_trials == 0) batch_trials = 100 * trials;
  const double t_max = *std::max_element(t_values.begin(), t_values.end());
  const double exit_cap = 1e3 * std::max(1.0, t_max);

  const std::uint64_t batch_stream = stream_id("Renewal/first-exit");
  auto batch = run_blocks(batch_trials, threads, [&](std::size_t begin, std::size_t end) {
    RunningStats acc;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = trial_rng(seed, batch_stream, k);
      const auto e = sample_first_exit(spec, rng, dt, exit_cap);
      if (!e) throw DomainError("process did not leave the unit ball; E T_1 is not finite here");
      acc.add(e->time);
    }
    return acc;
  });
  RunningStats exit_stats;
  for (const auto& b : batch) exit_stats.merge(b);

  RenewalResult r;
  r.mean_exit_time = exit_stats.to_estimate(seed);
  r.rate = 1.0 / r.mean_exit_time.mean;
  r.rate_std_error = r.mean_exit_time.std_error / (r.mean_exit_time.mean * r.mean_exit_time.mean);

  for (double t : t_values) {
    const std::size_t n_trials = std::max<std::size_t>(
        200, std::min<std::size_t>(trials, static_cast<std::size_t>(static_cast<double>(trials) * 100.0 / t)));
    const std::uint64_t stream = stream_id("Renewal/t=" + std::to_string(t));
    auto blocks = run_blocks(n_trials, threads, [&](std::size_t begin, std::size_t end) {
      RunningStats acc;
      Eigen::VectorXd x(spec.d), anchor(spec.d), step(spec.d);
      for (std::size_t k = begin; k < end; ++k) {
        Rng rng = trial_rng(seed, stream, k);
        std::size_t count = 0;
        if (spec.flavor == Flavor::CompoundPoissonHeavy) {
          count = exit_times(sample_cpp_path(spec, t, rng), ExitScan::Continuous).count_until(t);
        } else {
          // Streaming grid scan; same exit rule as the first-exit batch.
          IncrementSampler inc(spec, dt);
          const auto steps = static_cast<std::size_t>(std::floor(t / dt + 1e-9));
          x.setZero();
          anchor.setZero();
          for (std::size_t i = 0; i < steps; ++i) {
            inc.next(rng, step.data());
            x += step;
            if ((x - anchor).squaredNorm() > 1.0) {
              ++count;
              anchor = x;
            }
          }
        }
        acc.add(static_cast<double>(count) / t);
      }
      return acc;
    });
    RunningStats total;
    for (const auto& b : blocks) total.merge(b);
    RenewalPoint pt;
    pt.t = t;
    pt.ratio = total.to_estimate(seed);
    ClosedFormTarget target{"1/E_T1", {{"mean_exit_time", r.mean_exit_time.mean}}, r.rate, "1/time"};
    pt.ratio.attach_target(std::move(target));
    pt.gap = std::abs(pt.ratio.mean - r.rate) / r.rate;
    r.points.push_back(std::move(pt));
  }
  r.gap_decreasing = true;
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    if (!(r.points[i].gap < r.points[i - 1].gap)) r.gap_decreasing = false;
  }
  return r;
}

ScaledHullResult scaled_hull_convergence(const StableSpec& spec, const std::vector<double>& t_values,
                                         std::size_t trials, std::uint64_t seed, unsigned threads) {
  spec.validate();
  if (spec.flavor != Flavor::CompoundPoissonHeavy) throw ConfigError("scaled hull convergence needs a compound Poisson process");
  if (spec.d != 2 && spec.d != 3) throw DimensionError("scaled hull convergence needs d in {2, 3}");
  if (spec.cpp.jump_law == JumpLaw::Pareto && !(spec.cpp.tail_alpha < 2.0)) {
    throw ConfigError("tail_alpha >= 2 has a Gaussian limit; use Gaussian jumps");
  }
  if (!drift_of(spec).isZero()) throw ConfigError("scaled hull convergence needs zero drift (symmetric limit)");
  if (t_values.empty() || *std::max_element(t_values.begin(), t_values.end()) < 1e3) {
    throw ConfigError("scaled hull convergence needs a largest t >= 1000");
  }
  const double alpha = stable_index(spec);

  // First-exit batch: E T_1 and the first coordinate of X(T_1).
  constexpr std::size_t kBlock = 100, kBlocks = 2000;
  const std::uint64_t exit_stream = stream_id("ScaledHull/first-exit");
  std::vector<double> times, first_coord;
  {
    auto blocks = run_blocks(kBlock * kBlocks, threads, [&](std::size_t begin, std::size_t end) {
      std::vector<std::pair<double, double>> v;
      for (std::size_t k = begin; k < end; ++k) {
        Rng rng = trial_rng(seed, exit_stream, k);
        const auto e = sample_first_exit(spec, rng);
        if (!e) throw DomainError("process did not leave the unit ball");
        v.emplace_back(e->time, e->point[0]);
      }
      return v;
    });
    for (const auto& b : blocks) {
      for (const auto& [t, x] : b) {
        times.push_back(t);
        first_coord.push_back(x);
      }
    }
  }
  RunningStats tstats;
  for (double t : times) tstats.add(t);

  ScaledHullResult r;
  r.mean_exit_time = tstats.mean();
  if (alpha >= 2.0) {
    RunningStats xs;
    for (double x : first_coord) xs.add(x);
    r.fitted_c = 0.5 * (xs.variance() + xs.mean() * xs.mean());
  } else {
    std::vector<double> sums;
    const double norm = std::pow(static_cast<double>(kBlock), -1.0 / alpha);
    for (std::size_t b = 0; b < kBlocks; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < kBlock; ++i) s += first_coord[b * kBlock + i];
      sums.push_back(std::abs(s * norm));
    }
    Rng ref_rng(derive_seed(seed, stream_id("ScaledHull/reference-median"), 0));
    std::vector<double> ref(200'000);
    for (double& v : ref) v = std::abs(sample_stable_1d(alpha, 1.0, ref_rng));
    const double sigma = median(sums) / median(ref);
    r.fitted_c = std::pow(sigma, alpha);
  }

  const StableSpec limit = alpha >= 2.0 ? StableSpec::brownian(spec.d, r.fitted_c)
                                        : StableSpec::isotropic(alpha, r.fitted_c, spec.d);
  const double limit_horizon = 1.0 / r.mean_exit_time;
  const std::uint64_t limit_stream = stream_id("ScaledHull/limit");
  const std::vector<double> reference = collect_trials(trials, threads, [&](std::size_t k) {
    Rng rng = trial_rng(seed, limit_stream, k);
    return intrinsic_volumes(convex_hull(sample_walk_path(limit, 2000, limit_horizon, rng)))[1];
  });
  RunningStats ref_stats;
  for (double v : reference) ref_stats.add(v);
  r.mean_limit = ref_stats.mean();

  for (double t : t_values) {
    const std::uint64_t stream = stream_id("ScaledHull/t=" + std::to_string(t));
    const double scale = std::pow(t, -1.0 / alpha);
    const std::vector<double> sample = collect_trials(trials, threads, [&](std::size_t k) {
      Rng rng = trial_rng(seed, stream, k);
      return scale * intrinsic_volumes(convex_hull(sample_cpp_path(spec, t, rng)))[1];
    });
    RunningStats s;
    for (double v : sample) s.add(v);
    r.points.push_back({t, ks_two_sample(sample, reference), s.mean()});
  }
  r.ks_decreasing = r.points.size() >= 2 && r.points.back().ks.statistic < r.points.front().ks.statistic;
  return r;
}

ExitTailResult exit_value_tail_experiment(const StableSpec& spec, std::size_t trials, std::uint64_t seed,
                                          std::size_t hill_k, unsigned threads) {
  spec.validate();
  if (spec.flavor != Flavor::CompoundPoissonHeavy) throw ConfigError("exit tail experiment needs a compound Poisson process");
  if (trials < 100) throw ParameterError("exit tail experiment needs at least 100 trials");
  const std::uint64_t stream = stream_id("ExitTail/first-exit");
  const std::vector<double> norms = collect_trials(trials, threads, [&](std::size_t k) {
    Rng rng = trial_rng(seed, stream, k);
    const auto e = sample_first_exit(spec, rng);
    if (!e) throw DomainError("process did not leave the unit ball");
    return e->point.norm();
  });
  ExitTailResult r;
  r.samples = norms.size();
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  if (*hi - *lo <= 1e-9 * *hi) {
    r.degenerate = true;
    return r;
  }
  r.probe = hill_stability(norms, hill_k ? hill_k : default_hill_k(trials));
  return r;
}

ContinuityCheck hull_range_continuity_check(const PathSample& a, const PathSample& b) {
  if (a.dim() != b.dim()) throw ParameterError("continuity check: dimension mismatch");
  if (a.times != b.times) throw ParameterError("continuity check needs a common time grid");
  ContinuityCheck c;
  c.sup_distance = a.size() ? (a.points - b.points).colwise().norm().maxCoeff() : 0.0;
  const Polytope ha = convex_hull(a), hb = convex_hull(b);
  c.hausdorff = hausdorff(ha, hb);
  c.holds = c.hausdorff <= c.sup_distance + kGeomEps * (1.0 + std::max(ha.scale, hb.scale));
  return c;
}

}  // namespace levyhull
