// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// LEVYHULL_ACCEPT_QUICK=1 divides trial counts by 10 (for iteration only;
// the pinned counts are the ones below).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levyhull/closed_form.hpp"
#include "levyhull/experiments.hpp"
#include "levyhull/hull.hpp"
#include "levyhull/limits.hpp"
#include "levyhull/lp_volumes.hpp"
#include "levyhull/report.hpp"

using namespace levyhull;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 20240611;

std::size_t scaled(std::size_t trials) {
  static const bool quick = [] {
    const char* q = std::getenv("LEVYHULL_ACCEPT_QUICK");
    return q && std::string(q) == "1";
  }();
  return quick ? std::max<std::size_t>(trials / 10, 100) : trials;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// |mean - target| <= max(k * stderr, band * |target|)
bool within(const EstimateResult& e, double target, double k, double band) {
  return std::abs(e.mean - target) <= std::max(k * e.std_error, band * std::abs(target));
}

std::string describe(const EstimateResult& e, double target) {
  return fmt("mean=%.5g se=%.3g target=%.5g rel=%+.4f", e.mean, e.std_error, target, (e.mean - target) / target);
}

ExperimentConfig iv_config(StableSpec spec, std::size_t n, std::size_t trials, std::string label) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::IntrinsicVolumes;
  c.spec = std::move(spec);
  c.n_steps = n;
  c.trials = trials;
  c.label = std::move(label);
  return c;
}

// Criteria 1 and 2 share one run.
const std::vector<EstimateResult>& brownian_iv() {
  static const auto r = run_intrinsic_volume_experiment(iv_config(StableSpec::brownian(2), 10'000, scaled(10'000), "accept_brownian_d2"));
  return r;
}

Outcome c1() {
  const EstimateResult& e = brownian_iv()[1];
  return {within(e, pi / 2.0, 4.0, 0.02), describe(e, pi / 2.0)};
}

Outcome c2() {
  const EstimateResult& e = brownian_iv()[0];
  const double t = std::sqrt(2.0 * pi);
  return {within(e, t, 4.0, 0.02), describe(e, t)};
}

Outcome c3() {
  const auto est = run_intrinsic_volume_experiment(
      iv_config(StableSpec::isotropic(1.5, 1.0, 2), 10'000, scaled(10'000), "accept_stable_d2"));
  Outcome o{true, {}};
  for (int j = 1; j <= 2; ++j) {
    const double t = closed_form::ev_intrinsic_isotropic(1.5, 1.0, 2, j);
    const EstimateResult& e = est[static_cast<std::size_t>(j - 1)];
    o.pass = o.pass && within(e, t, 4.0, 0.03);
    o.detail += fmt("j=%d ", j) + describe(e, t) + "; ";
  }
  return o;
}

Outcome c4() {
  // Independent streams (distinct labels) at horizons 1 and 4; the ratio
  // cancels the common discretization bias.
  struct Case {
    StableSpec spec;
    int j;
  };
  const std::vector<Case> cases = {{StableSpec::brownian(2), 1}, {StableSpec::brownian(2), 2},
                                   {StableSpec::isotropic(1.5, 1.0, 2), 1}};
  Outcome o{true, {}};
  for (const Case& cs : cases) {
    auto c1 = iv_config(cs.spec, 1000, scaled(10'000), fmt("accept_selfsim_a%g_h1", cs.spec.alpha));
    auto c4 = c1;
    c4.horizon = 4.0;
    c4.label = fmt("accept_selfsim_a%g_h4", cs.spec.alpha);
    c1.j_orders = c4.j_orders = {cs.j};
    const EstimateResult a = run_intrinsic_volume_experiment(c4).front();
    const EstimateResult b = run_intrinsic_volume_experiment(c1).front();
    const double ratio = a.mean / b.mean;
    const double se = ratio * std::hypot(a.std_error / a.mean, b.std_error / b.mean);
    const double target = std::pow(4.0, cs.j / cs.spec.alpha);
    const bool ok = std::abs(ratio - target) <= 3.0 * se;
    o.pass = o.pass && ok;
    o.detail += fmt("(a=%g,j=%d) ratio=%.4f target=%.4f se=%.3g; ", cs.spec.alpha, cs.j, ratio, target, se);
  }
  return o;
}

Outcome c5() {
  Outcome o{true, {}};
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d) {
    for (int j = 1; j <= d; ++j) {
      const EstimateResult e = run_gram_experiment(d, j, GramLaw::StandardGaussian, scaled(1'000'000), kSeed);
      const double t = e.target->value;
      const double z = std::abs(e.mean - t) / e.std_error;
      worst = std::max(worst, z);
      o.pass = o.pass && z <= 4.0;
      if (d == 2 && j == 1) {
        o.pass = o.pass && std::abs(t - std::sqrt(pi / 2.0)) < 1e-12;
        o.detail += fmt("d=2,j=1 mean=%.5f target=%.5f; ", e.mean, t);
      }
    }
  }
  o.detail += fmt("max |z| over d<=4, j<=d = %.2f", worst);
  return o;
}

Outcome c6() {
  Rng rng(kSeed);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> count(1, 8);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int m = count(rng);
    Eigen::MatrixXd g(2, m);
    for (int k = 0; k < m; ++k) g.col(k) << nd(rng), nd(rng);
    const IntrinsicVolumes hv = intrinsic_volumes(zonotope_hull(g));
    for (int j = 1; j <= 2; ++j) {
      const double f = zonotope_intrinsic_volume(g, j);
      const double h = hv[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(f - h) / std::max(std::abs(h), 1e-300));
    }
  }
  return {worst <= 1e-9, fmt("max relative difference %.2e over 20 generator sets", worst)};
}

Outcome c7() {
  Outcome o{true, {}};
  for (auto [alpha, j] : std::vector<std::pair<double, int>>{{2.0, 1}, {2.0, 2}, {1.5, 1}, {1.5, 2}}) {
    const double c = closed_form::dirichlet_constant(alpha, j);
    const double rel = std::abs(closed_form::lattice_sum_partial(alpha, j, 2000) - c) / c;
    o.pass = o.pass && rel < 0.02;
    o.detail += fmt("(%g,%d) rel=%.4f; ", alpha, j, rel);
  }
  const double c22 = closed_form::dirichlet_constant(2.0, 2);
  o.pass = o.pass && std::abs(c22 - pi) < 1e-12;
  o.detail += fmt("constant(2,2)=%.12f", c22);
  return o;
}

ExperimentConfig count_config(ExperimentKind kind, std::size_t n, std::size_t trials) {
  ExperimentConfig c;
  c.experiment = kind;
  c.spec = StableSpec::brownian(2);
  c.n_steps = n;
  c.trials = trials;
  c.label = std::string("accept_") + std::string(to_string(kind)) + "_n" + std::to_string(n);
  return c;
}

Outcome c8() {
  Outcome o{true, {}};
  std::vector<EstimateResult> freq;
  for (std::size_t n : {100u, 1000u, 10'000u}) {
    const BoundaryResult r = run_boundary_origin_experiment(count_config(ExperimentKind::BoundaryOrigin, n, scaled(10'000)));
    o.pass = o.pass && r.freq.mean <= r.eyn_bound + 4.0 * r.freq.std_error;
    o.detail += fmt("n=%zu freq=%.4f se=%.4f EYn=%.4f; ", n, r.freq.mean, r.freq.std_error, r.eyn_bound);
    freq.push_back(r.freq);
  }
  for (std::size_t i = 1; i < freq.size(); ++i) {
    const double se = std::hypot(freq[i].std_error, freq[i - 1].std_error);
    o.pass = o.pass && freq[i - 1].mean - freq[i].mean > 3.0 * se;
  }
  return o;
}

Outcome c9() {
  const EstimateResult a = run_interior_endpoint_experiment(count_config(ExperimentKind::InteriorEndpoint, 100, scaled(10'000)));
  const EstimateResult b = run_interior_endpoint_experiment(count_config(ExperimentKind::InteriorEndpoint, 10'000, scaled(10'000)));
  const double se = std::hypot(a.std_error, b.std_error);
  return {b.mean - a.mean > 3.0 * se && b.mean > 0.85,
          fmt("n=100 freq=%.4f, n=10^4 freq=%.4f, difference/se=%.1f", a.mean, b.mean, (b.mean - a.mean) / se)};
}

Outcome c10() {
  const auto est = verify_lp_brownian({1.0, 2.0}, 2, 10'000, scaled(10'000), kSeed);
  Outcome o{true, {}};
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double t = est[i].target->value;
    o.pass = o.pass && within(est[i], t, 4.0, 0.02);
    o.detail += fmt("p=%zu ", i + 1) + describe(est[i], t) + "; ";
  }
  o.pass = o.pass && std::abs(est[1].target->value - pi) < 1e-12;
  return o;
}

Outcome c11() {
  const LpConsistency r = verify_lp_stable_consistency(1.5, 1.0, 1.0, 2, 10'000, scaled(10'000), 10'000, kSeed);
  return {r.consistent, fmt("hull=%.5g (se %.3g) sup=%.5g (se %.3g) gap=%+.4f z=%.2f", r.hullside.mean,
                            r.hullside.std_error, r.supside.mean, r.supside.std_error, r.relative_gap, r.combined_z)};
}

Outcome c12() {
  const RenewalResult r = renewal_ratio_experiment(StableSpec::brownian(2), {10.0, 100.0, 1000.0}, scaled(10'000), kSeed);
  Outcome o{r.gap_decreasing && r.points.back().gap < 0.05, fmt("1/E T_1=%.5f; ", r.rate)};
  for (const RenewalPoint& p : r.points) o.detail += fmt("t=%g N_t/t=%.5f gap=%.5f; ", p.t, p.ratio.mean, p.gap);
  return o;
}

Outcome c13() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::TailIndex;
  c.spec = StableSpec::isotropic(1.5, 1.0, 2);
  c.n_steps = 100;
  c.trials = scaled(100'000);
  c.j_orders = {1};
  c.label = "accept_tail";
  const TailProbe hull_tail = run_tail_index_experiment(c);
  const ExitTailResult exit_tail = exit_value_tail_experiment(StableSpec::compound_poisson(2, 1.5, 3.0), scaled(100'000), kSeed);
  const bool ok = hull_tail.index >= 1.2 && hull_tail.index <= 1.8 && !exit_tail.degenerate &&
                  exit_tail.probe.index >= 1.3 && exit_tail.probe.index <= 1.7;
  return {ok, fmt("V_1 Hill=%.4f (k=%zu); |X(T_1)| Hill=%.4f (k=%zu)", hull_tail.index, hull_tail.k,
                  exit_tail.probe.index, exit_tail.probe.k)};
}

std::string numeric_columns(const std::filesystem::path& csv) {
  // results.csv carries no run id or timestamp, so the whole file must match.
  std::ifstream in(csv);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c14() {
  std::vector<ExperimentConfig> cfgs = smoke_suite();
  for (auto& c : cfgs) c.master_seed = kSeed;
  const auto base = std::filesystem::temp_directory_path() / "levyhull_accept_determinism";
  std::filesystem::remove_all(base);
  std::string first;
  bool same = true;
  std::string detail;
  int run = 0;
  for (unsigned threads : {1u, 8u, 1u}) {
    const auto dir = base / ("run" + std::to_string(run++));
    run_all(cfgs, dir.string(), ExecOptions{threads});
    const std::string csv = numeric_columns(dir / "results.csv");
    if (first.empty()) first = csv;
    same = same && csv == first;
    detail += fmt("threads=%u ok; ", threads);
  }
  std::filesystem::remove_all(base);
  return {same && !first.empty(), detail + fmt("%zu bytes of results.csv compared", first.size())};
}

Outcome c15() {
  const auto start = std::chrono::steady_clock::now();
  auto close = [](double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); };
  bool ok = true;

  Eigen::MatrixXd cube(3, 8);
  for (int i = 0; i < 8; ++i) cube.col(i) << (i & 1), ((i >> 1) & 1), ((i >> 2) & 1);
  const IntrinsicVolumes vc = intrinsic_volumes(hull3d(cube));
  const double cube_ref[] = {1, 3, 3, 1};
  for (int j = 0; j < 4; ++j) ok = ok && close(vc[static_cast<std::size_t>(j)], cube_ref[j], 1e-12);

  Eigen::MatrixXd sq(2, 4);
  sq << 0, 1, 1, 0, 0, 0, 1, 1;
  const IntrinsicVolumes vs = intrinsic_volumes(hull2d(sq));
  const double sq_ref[] = {1, 2, 1};
  for (int j = 0; j < 3; ++j) ok = ok && close(vs[static_cast<std::size_t>(j)], sq_ref[j], 1e-12);

  // Corner tetrahedron conv{0, e1, e2, e3}: V_1 = (1/2pi) sum over edges of
  // length times external angle.
  Eigen::MatrixXd tet = Eigen::MatrixXd::Zero(3, 4);
  tet(0, 1) = tet(1, 2) = tet(2, 3) = 1.0;
  const IntrinsicVolumes vt = intrinsic_volumes(hull3d(tet));
  const double tet_ref[] = {1.0, (3.0 * (pi / 2.0) + 3.0 * std::sqrt(2.0) * std::acos(-1.0 / std::sqrt(3.0))) / (2.0 * pi),
                            (1.5 + std::sqrt(3.0) / 2.0) / 2.0, 1.0 / 6.0};
  for (int j = 0; j < 4; ++j) ok = ok && close(vt[static_cast<std::size_t>(j)], tet_ref[j], 1e-12);

  // Steiner: area(K + rB) = V_2 + 2 r V_1 + pi r^2, with the disk replaced by
  // a fine inscribed polygon (area deficit ~ (2pi/m)^2 / 6).
  Rng rng(kSeed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd pts(2, 12);
  for (int c = 0; c < 12; ++c) pts.col(c) << nd(rng), nd(rng);
  const Polytope k = hull2d(pts);
  const double r = 0.7;
  const int m = 8192;
  Eigen::MatrixXd sum(2, k.vertices.cols() * m);
  for (Eigen::Index v = 0; v < k.vertices.cols(); ++v)
    for (int a = 0; a < m; ++a) {
      const double th = 2.0 * pi * a / m;
      sum.col(v * m + a) = k.vertices.col(v) + r * Eigen::Vector2d(std::cos(th), std::sin(th));
    }
  const IntrinsicVolumes vk = intrinsic_volumes(k);
  const double steiner = vk[2] + 2.0 * r * vk[1] + pi * r * r;
  const double direct = intrinsic_volumes(hull2d(sum))[2];
  const double steiner_rel = std::abs(direct - steiner) / steiner;
  ok = ok && steiner_rel < 1e-6;

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 1.0;
  return {ok, fmt("tetrahedron V_1=%.6f V_2=%.6f; Steiner relative difference %.2e; %.3f s", vt[1], vt[2], steiner_rel, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Brownian E V_2, d=2", c1},
      {"Brownian E V_1, d=2", c2},
      {"isotropic stable E V_1, E V_2 (alpha=1.5)", c3},
      {"self-similarity under horizon scaling", c4},
      {"Gaussian Gram determinants, d<=4", c5},
      {"zonotope formula vs explicit hull", c6},
      {"lattice sums at n=2000 vs constants", c7},
      {"origin on the boundary: bound and decay", c8},
      {"endpoint in the interior", c9},
      {"Brownian L_p mixed volumes", c10},
      {"stable L_p: hull vs supremum", c11},
      {"renewal rate of exit times", c12},
      {"tail indices", c13},
      {"determinism across thread counts", c14},
      {"exact-geometry checks", c15},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s C%02zu %-44s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures ? 1 : 0;
}
