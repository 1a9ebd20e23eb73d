#pragma once

// Support functions, their L_p sums, and the mixed volume V_p(B^d, M).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "levyhull/hull.hpp"
#include "levyhull/stats.hpp"

namespace levyhull {

/// Support function of a ball r B^d, a polytope, or an L_p sum of two such.
class SupportFn {
 public:
  static SupportFn ball(double r, int d);
  static SupportFn polytope(Polytope p);

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& u) const;
  int dim() const { return d_; }

  /// d = 2: angles in [0, 2 pi) where theta -> h(cos theta, sin theta) may
  /// fail to be smooth (outward edge normals of polygons).
  std::vector<double> breakpoints() const;

  /// Throws DomainError if h < 0 somewhere on a probe grid of directions,
  /// i.e. the body does not contain the origin.
  void require_origin_inside() const;

 private:
  friend SupportFn lp_sum_support(const SupportFn& a, const SupportFn& b, double p);

  enum class Kind { Ball, Polytope, LpSum };
  Kind kind_ = Kind::Ball;
  int d_ = 2;
  double r_ = 1.0;
  double p_ = 1.0;
  std::shared_ptr<const Polytope> poly_;
  std::shared_ptr<const SupportFn> a_, b_;
};

/// u -> (h_a(u)^p + h_b(u)^p)^{1/p}, p >= 1. Both bodies must contain the origin.
SupportFn lp_sum_support(const SupportFn& a, const SupportFn& b, double p);

struct VpValue {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic quadrature
};

/// V_p(B^d, M) = (1/d) integral over the sphere of h(M,u)^p.
/// d = 2: composite Gauss-Legendre on the circle split at the breakpoints of h,
/// about quad_points nodes in total. d = 3: quad_points uniform directions.
VpValue vp_ball_mixed(const SupportFn& m, double p, int d, std::size_t quad_points = 4096,
                      std::uint64_t seed = 0);

/// E V_p(B^d, Z) for standard Brownian motion from hulls of n-step walks, one
/// estimate per p with target 2^{p/2} Gamma((p+1)/2) / sqrt(pi) * kappa_d.
std::vector<EstimateResult> verify_lp_brownian(const std::vector<double>& p_values, int d,
                                               std::size_t n_steps, std::size_t trials,
                                               std::uint64_t seed, std::size_t quad_points = 4096,
                                               unsigned threads = 0);

struct LpConsistency {
  EstimateResult hullside;
  EstimateResult supside;
  double combined_z = 0.0;
  double relative_gap = 0.0;
  bool consistent = false;  // |gap| <= 4 combined stderr + band * supside
};

/// Two estimators of E V_p(B^d, Z) for an isotropic alpha-stable process:
/// hull-based, and E(sup_{t<=1} R(t))^p c^{p/alpha} kappa_d with R a
/// standard symmetric stable walk on grid_n steps. Needs 1 <= p < alpha < 2.
LpConsistency verify_lp_stable_consistency(double alpha, double c, double p, int d,
                                           std::size_t n_steps, std::size_t trials,
                                           std::size_t grid_n, std::uint64_t seed,
                                           std::size_t sup_trials = 0, double band = 0.03,
                                           std::size_t quad_points = 4096, unsigned threads = 0);

}  // namespace levyhull
