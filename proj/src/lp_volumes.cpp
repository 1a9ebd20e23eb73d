#include "levyhull/lp_volumes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "levyhull/closed_form.hpp"
#include "levyhull/errors.hpp"
#include "levyhull/parallel.hpp"

namespace levyhull {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGLNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGLWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double powp(double h, double p) { return std::pow(std::max(h, 0.0), p); }

}  // namespace

SupportFn SupportFn::ball(double r, int d) {
  if (!(r >= 0.0)) throw ParameterError("ball radius must be >= 0");
  if (d < 1) throw ParameterError("ball dimension must be >= 1");
  SupportFn f;
  f.kind_ = Kind::Ball;
  f.r_ = r;
  f.d_ = d;
  return f;
}

SupportFn SupportFn::polytope(Polytope p) {
  if (p.vertices.cols() == 0) throw ParameterError("support function of an empty polytope");
  SupportFn f;
  f.kind_ = Kind::Polytope;
  f.d_ = static_cast<int>(p.vertices.rows());
  f.poly_ = std::make_shared<const Polytope>(std::move(p));
  return f;
}

double SupportFn::operator()(const Eigen::Ref<const Eigen::VectorXd>& u) const {
  if (u.size() != d_) throw ParameterError("support function: dimension mismatch");
  switch (kind_) {
    case Kind::Ball:
      return r_ * u.norm();
    case Kind::Polytope:
      return (poly_->vertices.transpose() * u).maxCoeff();
    case Kind::LpSum: {
      const double ha = (*a_)(u), hb = (*b_)(u);
      const double hi = std::max(ha, hb), lo = std::min(ha, hb);
      if (hi <= 0.0) return 0.0;
      // hi * (1 + (lo/hi)^p)^{1/p} stays finite for large p.
      return hi * std::pow(1.0 + std::pow(std::max(lo, 0.0) / hi, p_), 1.0 / p_);
    }
  }
  return 0.0;
}

std::vector<double> SupportFn::breakpoints() const {
  std::vector<double> out;
  if (d_ != 2) return out;
  if (kind_ == Kind::Polytope) {
    const Eigen::MatrixXd& v = poly_->vertices;
    const Eigen::Index n = v.cols();
    if (n == 2) {
      const Eigen::Vector2d e = v.col(1) - v.col(0);
      out.push_back(wrap_angle(std::atan2(-e.x(), e.y())));
      out.push_back(wrap_angle(std::atan2(e.x(), -e.y())));
    } else if (n >= 3) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Vector2d e = v.col((i + 1) % n) - v.col(i);
        out.push_back(wrap_angle(std::atan2(-e.x(), e.y())));  // outward normal (e.y, -e.x)
      }
    }
  } else if (kind_ == Kind::LpSum) {
    out = a_->breakpoints();
    const auto b = b_->breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SupportFn::require_origin_inside() const {
  constexpr int kProbes = 256;
  double scale = 0.0;
  std::vector<double> values;
  if (d_ == 2) {
    for (int k = 0; k < kProbes; ++k) {
      const double a = kTwoPi * k / kProbes;
      values.push_back((*this)(Eigen::Vector2d(std::cos(a), std::sin(a))));
    }
  } else {
    // Fibonacci lattice on the sphere (first three coordinates; others zero).
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < kProbes; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / kProbes;
      const double r = std::sqrt(1.0 - z * z);
      Eigen::VectorXd u = Eigen::VectorXd::Zero(d_);
      u[0] = r * std::cos(golden * k);
      if (d_ > 1) u[1] = r * std::sin(golden * k);
      if (d_ > 2) u[2] = z;
      values.push_back((*this)(u));
    }
  }
  for (double h : values) scale = std::max(scale, std::abs(h));
  for (double h : values) {
    if (h < -1e-9 * std::max(scale, 1e-300)) {
      throw DomainError("support function is negative somewhere: the body does not contain the origin");
    }
  }
}

SupportFn lp_sum_support(const SupportFn& a, const SupportFn& b, double p) {
  if (!(p >= 1.0)) throw DomainError("L_p sum needs p >= 1");
  if (a.dim() != b.dim()) throw ParameterError("L_p sum: dimension mismatch");
  a.require_origin_inside();
  b.require_origin_inside();
  SupportFn f;
  f.kind_ = SupportFn::Kind::LpSum;
  f.d_ = a.dim();
  f.p_ = p;
  f.a_ = std::make_shared<const SupportFn>(a);
  f.b_ = std::make_shared<const SupportFn>(b);
  return f;
}

VpValue vp_ball_mixed(const SupportFn& m, double p, int d, std::size_t quad_points, std::uint64_t seed) {
  if (!(p >= 1.0)) throw DomainError("V_p needs p >= 1");
  if (d != m.dim()) throw ParameterError("vp_ball_mixed: dimension mismatch");
  if (d != 2 && d != 3) throw DimensionError("vp_ball_mixed supports d in {2, 3}");
  if (quad_points < 8) throw ParameterError("vp_ball_mixed needs at least 8 quadrature points");

  if (d == 3) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    RunningStats stats;
    for (std::size_t k = 0; k < quad_points; ++k) {
      Eigen::Vector3d u(normal(rng), normal(rng), normal(rng));
      u.normalize();
      stats.add(powp(m(u), p));
    }
    const double area = 4.0 * std::numbers::pi;  // sigma(S^2)
    return {area * stats.mean() / 3.0, area * stats.std_error() / 3.0};
  }

  // theta -> h^p is smooth between breakpoints, so Gauss-Legendre panels that
  // never straddle one converge fast.
  std::vector<double> cuts = m.breakpoints();
  if (cuts.empty()) cuts.push_back(0.0);
  const std::size_t segments = cuts.size();
  const double panels_total = std::max<double>(static_cast<double>(segments), static_cast<double>(quad_points) / 8.0);
  double integral = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    const double lo = cuts[s];
    const double hi = s + 1 < segments ? cuts[s + 1] : cuts[0] + kTwoPi;
    const double len = hi - lo;
    if (len <= 0.0) continue;
    const std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(panels_total * len / kTwoPi)));
    const double w = len / static_cast<double>(panels);
    for (std::size_t q = 0; q < panels; ++q) {
      const double mid = lo + (static_cast<double>(q) + 0.5) * w;
      double acc = 0.0;
      for (std::size_t g = 0; g < 8; ++g) {
        const double a = mid + 0.5 * w * kGLNodes[g];
        acc += kGLWeights[g] * powp(m(Eigen::Vector2d(std::cos(a), std::sin(a))), p);
      }
      integral += 0.5 * w * acc;
    }
  }
  return {integral / 2.0, 0.0};
}

std::vector<EstimateResult> verify_lp_brownian(const std::vector<double>& p_values, int d, std::size_t n_steps,
                                               std::size_t trials, std::uint64_t seed, std::size_t quad_points,
                                               unsigned threads) {
  if (d != 2 && d != 3) throw DimensionError("verify_lp_brownian supports d in {2, 3}");
  if (p_values.empty()) throw ParameterError("verify_lp_brownian needs at least one p");
  for (double p : p_values) {
    if (!(p >= 1.0)) throw DomainError("verify_lp_brownian needs p >= 1");
  }
  if (trials < 2) throw ParameterError("verify_lp_brownian needs at least 2 trials");
  const StableSpec spec = StableSpec::brownian(d);
  const std::uint64_t stream = stream_id("LpBrownian/d=" + std::to_string(d) + "/n=" + std::to_string(n_steps));
  auto blocks = run_blocks(trials, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<RunningStats> acc(p_values.size());
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = trial_rng(seed, stream, k);
      const SupportFn h = SupportFn::polytope(convex_hull(sample_walk_path(spec, n_steps, 1.0, rng)));
      const std::uint64_t dir_seed = rng();
      for (std::size_t i = 0; i < p_values.size(); ++i) {
        acc[i].add(vp_ball_mixed(h, p_values[i], d, quad_points, dir_seed).value);
      }
    }
    return acc;
  });
  std::vector<EstimateResult> out;
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    RunningStats total;
    for (const auto& b : blocks) total.merge(b[i]);
    EstimateResult e = total.to_estimate(seed);
    ClosedFormTarget t;
    t.name = "lp_brownian_factor*kappa_d";
    t.params = {{"p", p_values[i]}, {"d", d}};
    t.value = closed_form::lp_brownian_factor(p_values[i]) * closed_form::kappa(d);
    t.units = "length^p";
    e.attach_target(std::move(t));
    out.push_back(std::move(e));
  }
  return out;
}

LpConsistency verify_lp_stable_consistency(double alpha, double c, double p, int d, std::size_t n_steps,
                                           std::size_t trials, std::size_t grid_n, std::uint64_t seed,
                                           std::size_t sup_trials, double band, std::size_t quad_points,
                                           unsigned threads) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("stable L_p consistency needs 1 < alpha < 2");
  if (!(p >= 1.0)) throw DomainError("stable L_p consistency needs p >= 1");
  if (!(p < alpha)) throw DomainError("E (sup R)^p is infinite unless p < alpha");
  if (d != 2 && d != 3) throw DimensionError("stable L_p consistency supports d in {2, 3}");
  if (trials < 2 || n_steps < 1 || grid_n < 1) throw ParameterError("stable L_p consistency: empty run");
  if (sup_trials == 0) sup_trials = trials;

  const StableSpec spec = StableSpec::isotropic(alpha, c, d);
  const std::uint64_t hull_stream = stream_id("LpStable/hull/n=" + std::to_string(n_steps));
  auto hull_blocks = run_blocks(trials, threads, [&](std::size_t begin, std::size_t end) {
    RunningStats acc;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = trial_rng(seed, hull_stream, k);
      const SupportFn h = SupportFn::polytope(convex_hull(sample_walk_path(spec, n_steps, 1.0, rng)));
      acc.add(vp_ball_mixed(h, p, d, quad_points, rng()).value);
    }
    return acc;
  });

  const std::uint64_t sup_stream = stream_id("LpStable/sup/n=" + std::to_string(grid_n));
  const double step_scale = std::pow(1.0 / static_cast<double>(grid_n), 1.0 / alpha);
  auto sup_blocks = run_blocks(sup_trials, threads, [&](std::size_t begin, std::size_t end) {
    RunningStats acc;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = trial_rng(seed, sup_stream, k);
      double x = 0.0, sup = 0.0;
      for (std::size_t i = 0; i < grid_n; ++i) {
        x += sample_stable_1d(alpha, step_scale, rng);
        sup = std::max(sup, x);
      }
      acc.add(std::pow(sup, p));
    }
    return acc;
  });

  RunningStats hull_total, sup_total;
  for (const auto& b : hull_blocks) hull_total.merge(b);
  for (const auto& b : sup_blocks) sup_total.merge(b);

  LpConsistency r;
  r.hullside = hull_total.to_estimate(seed);
  r.supside = sup_total.to_estimate(seed);
  const double factor = std::pow(c, p / alpha) * closed_form::kappa(d);  // V_p(B^d, c^{1/alpha} B^d)
  r.supside.mean *= factor;
  r.supside.std_error *= factor;
  const double diff = r.hullside.mean - r.supside.mean;
  const double se = std::hypot(r.hullside.std_error, r.supside.std_error);
  r.combined_z = se > 0.0 ? diff / se : 0.0;
  r.relative_gap = r.supside.mean != 0.0 ? diff / r.supside.mean : 0.0;
  r.consistent = std::abs(diff) <= 4.0 * se + band * std::abs(r.supside.mean);
  return r;
}

}  // namespace levyhull
