#include "levyhull/closed_form.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "levyhull/errors.hpp"

namespace levyhull::closed_form {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void require_stable_index(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw DomainError("formula requires 1 < alpha <= 2, got alpha = " + std::to_string(alpha));
  }
}

void require_order(int d, int j) {
  if (d < 1 || j < 1 || j > d) {
    throw DomainError("need 1 <= j <= d, got d = " + std::to_string(d) + ", j = " + std::to_string(j));
  }
}

// (2m-1)!!/(2m)!! for m = 0..n as a running product of ratios.
std::vector<double> double_factorial_ratios(std::size_t n) {
  std::vector<double> u(n + 1);
  u[0] = 1.0;
  for (std::size_t m = 1; m <= n; ++m) {
    u[m] = u[m - 1] * (2.0 * static_cast<double>(m) - 1.0) / (2.0 * static_cast<double>(m));
  }
  return u;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn needs x > 0");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double kappa(int d) {
  if (d < 0) throw DomainError("kappa needs d >= 0");
  return std::pow(kPi, 0.5 * d) / gamma_fn(0.5 * d + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double ball_Vj(int d, int j, double r) {
  if (d < 0 || j < 0 || j > d) throw DomainError("ball_Vj needs 0 <= j <= d");
  if (r < 0.0) throw DomainError("ball_Vj needs r >= 0");
  return binomial(d, j) * kappa(d) / kappa(d - j) * std::pow(r, j);
}

double ev_intrinsic_stable(double alpha, int j, double vj_k) {
  require_stable_index(alpha);
  if (j < 1) throw DomainError("ev_intrinsic_stable needs j >= 1");
  if (vj_k < 0.0) throw DomainError("V_j(K) must be nonnegative");
  const double g = gamma_fn(1.0 - 1.0 / alpha) * gamma_fn(1.0 / alpha) / kPi;
  return std::pow(g, j) / gamma_fn(j / alpha + 1.0) * vj_k;
}

double ev_intrinsic_brownian(int d, int j) {
  require_order(d, j);
  return binomial(d, j) * std::pow(0.5 * kPi, 0.5 * j) * gamma_fn(0.5 * (d - j) + 1.0) /
         (gamma_fn(0.5 * j + 1.0) * gamma_fn(0.5 * d + 1.0));
}

double ev_intrinsic_isotropic(double alpha, double c, int d, int j) {
  require_order(d, j);
  if (!(c >= 0.0)) throw DomainError("scale c must be nonnegative");
  return ev_intrinsic_stable(alpha, j, ball_Vj(d, j, std::pow(c, 1.0 / alpha)));
}

double dirichlet_constant(double alpha, int j) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("dirichlet_constant needs 0 < alpha <= 2");
  if (j < 1) throw DomainError("dirichlet_constant needs j >= 1");
  return std::pow(gamma_fn(1.0 / alpha), j) / gamma_fn(j / alpha + 1.0);
}

double lattice_sum_partial(double alpha, int j, std::size_t n) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("lattice_sum_partial needs 0 < alpha <= 2");
  if (j < 1 || j > 3) throw ResourceError("lattice_sum_partial supports 1 <= j <= 3");
  if (n < 1) throw DomainError("lattice_sum_partial needs n >= 1");
  constexpr std::array<std::size_t, 3> kMaxN{10'000'000, 1'000'000, 20'000};
  if (n > kMaxN[static_cast<std::size_t>(j - 1)]) {
    throw ResourceError("lattice_sum_partial: n too large for j = " + std::to_string(j));
  }

  const double e = 1.0 / alpha - 1.0;
  std::vector<long double> w(n + 1, 0.0L);
  std::vector<long double> prefix(n + 1, 0.0L);  // prefix[m] = sum_{i<=m} w[i]
  for (std::size_t i = 1; i <= n; ++i) {
    w[i] = std::pow(static_cast<long double>(i), static_cast<long double>(e));
    prefix[i] = prefix[i - 1] + w[i];
  }

  long double total = 0.0L;
  if (j == 1) {
    total = prefix[n];
  } else if (j == 2) {
    for (std::size_t i = 1; i < n; ++i) total += w[i] * prefix[n - i];
  } else {
    // pairs[m] = sum over i2 + i3 <= m of w[i2] w[i3]
    std::vector<long double> pairs(n + 1, 0.0L);
    for (std::size_t m = 2; m <= n; ++m) {
      long double s = 0.0L;
      for (std::size_t i = 1; i < m; ++i) s += w[i] * prefix[m - i];
      pairs[m] = s;
    }
    for (std::size_t i = 1; i + 2 <= n; ++i) total += w[i] * pairs[n - i];
  }
  return static_cast<double>(total * std::pow(static_cast<long double>(n),
                                              -static_cast<long double>(j) / alpha));
}

double expected_faces_Yn(std::size_t n, int d) {
  if (d != 2 && d != 3) throw DomainError("expected_faces_Yn supports d in {2, 3}");
  if (n < 1) throw DomainError("expected_faces_Yn needs n >= 1");
  const std::vector<double> u = double_factorial_ratios(n);
  long double sum = 0.0L;
  if (d == 2) {
    for (std::size_t i = 1; i <= n; ++i) sum += u[n - i] / static_cast<long double>(i);
  } else {
    // For fixed i_3 = m: sum_{i_2 < m} 1/(i_2 (m - i_2)) = 2 H_{m-1} / m.
    long double harmonic = 0.0L;  // H_{m-1}
    for (std::size_t m = 2; m <= n; ++m) {
      harmonic += 1.0L / static_cast<long double>(m - 1);
      sum += u[n - m] * 2.0L * harmonic / static_cast<long double>(m);
    }
  }
  return static_cast<double>(2.0L * sum);
}

double vysotsky_ev(std::size_t n, int j, double alpha, double vj_k) {
  require_stable_index(alpha);
  if (vj_k < 0.0) throw DomainError("V_j(K) must be nonnegative");
  const double g = gamma_fn(1.0 - 1.0 / alpha) / kPi;
  return vj_k * std::pow(g, j) * lattice_sum_partial(alpha, j, n);
}

double ev_sup_brownian_p(double p) {
  if (!(p >= 1.0)) throw DomainError("ev_sup_brownian_p needs p >= 1");
  return std::pow(2.0, p) * gamma_fn(0.5 * (p + 1.0)) / std::sqrt(kPi);
}

double lp_brownian_factor(double p) {
  if (!(p >= 1.0)) throw DomainError("lp_brownian_factor needs p >= 1");
  return std::pow(2.0, 0.5 * p) * gamma_fn(0.5 * (p + 1.0)) / std::sqrt(kPi);
}

}  // namespace levyhull::closed_form
