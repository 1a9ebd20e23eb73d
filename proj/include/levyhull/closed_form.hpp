#pragma once

// Closed-form expectations and constants for convex hulls of symmetric stable
// Levy processes, evaluated in double precision.

#include <cstddef>

namespace levyhull::closed_form {

/// Gamma function for x > 0 (Lanczos, g = 7, nine coefficients).
double gamma_fn(double x);

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double kappa(int d);

double binomial(int n, int k);

/// V_j(r B^d) = C(d,j) kappa_d / kappa_{d-j} r^j.
double ball_Vj(int d, int j, double r);

/// E V_j(Z) for a symmetric alpha-stable process, 1 < alpha <= 2, given V_j(K)
/// of the associated zonoid K:
/// Gamma(1-1/alpha)^j Gamma(1/alpha)^j / (pi^j Gamma(j/alpha + 1)) * V_j(K).
double ev_intrinsic_stable(double alpha, int j, double vj_k);

/// E V_j(Z) for standard Brownian motion in R^d, j = 1..d.
double ev_intrinsic_brownian(int d, int j);

/// E V_j(Z) for an isotropic process with E exp{i<X(1),u>} = exp{-c |u|^alpha}.
double ev_intrinsic_isotropic(double alpha, double c, int d, int j);

/// Gamma(1/alpha)^j / Gamma(j/alpha + 1), the limit of lattice_sum_partial.
double dirichlet_constant(double alpha, int j);

/// n^{-j/alpha} * sum over i_1 + ... + i_j <= n (all i >= 1) of (i_1 ... i_j)^{1/alpha - 1}.
/// Exact summation; j <= 3.
double lattice_sum_partial(double alpha, int j, std::size_t n);

/// Expected number of faces of the hull of an n-step symmetric walk in R^d
/// (d in {2,3}) that contain the origin.
double expected_faces_Yn(std::size_t n, int d);

/// Exact E V_j(C_n) for the walk X(i/n), i = 0..n, embedded in a stable process.
double vysotsky_ev(std::size_t n, int j, double alpha, double vj_k);

/// E (sup_{t<=1} sqrt(2) W(t))^p = 2^p Gamma((p+1)/2) / sqrt(pi), p >= 1.
double ev_sup_brownian_p(double p);

/// Factor 2^{p/2} Gamma((p+1)/2) / sqrt(pi) relating E V_p(L, Z) to V_p(L, B^d)
/// for standard Brownian motion.
double lp_brownian_factor(double p);

}  // namespace levyhull::closed_form
