#include "levyhull/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levyhull/errors.hpp"

namespace levyhull {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng);
  while (x <= 0.0) x = u(rng);
  return x;
}

double standard_exponential(Rng& rng) { return -std::log(open_uniform(rng)); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw ParameterError("stability index must lie in (0, 2], got " + std::to_string(alpha));
  }
}

void check_scale(double scale) {
  if (!(scale > kMinScale) || !std::isfinite(scale)) {
    throw ParameterError("scale must be finite and > 1e-12, got " + std::to_string(scale));
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream, std::uint64_t trial) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ stream);
  return splitmix64(h ^ (trial * 0xD1B54A32D192ED03ULL));
}

StableSpec StableSpec::brownian(int d, double c) {
  StableSpec s;
  s.alpha = 2.0;
  s.c = c;
  s.d = d;
  s.flavor = Flavor::Brownian;
  s.validate();
  return s;
}

StableSpec StableSpec::isotropic(double alpha, double c, int d) {
  StableSpec s;
  s.alpha = alpha;
  s.c = c;
  s.d = d;
  s.flavor = Flavor::Isotropic;
  s.validate();
  return s;
}

StableSpec StableSpec::compound_poisson(int d, double tail_alpha, double jump_rate,
                                        std::vector<double> drift, JumpLaw law) {
  StableSpec s;
  s.d = d;
  s.flavor = Flavor::CompoundPoissonHeavy;
  s.cpp.tail_alpha = tail_alpha;
  s.cpp.jump_rate = jump_rate;
  s.cpp.drift = std::move(drift);
  s.cpp.jump_law = law;
  s.alpha = law == JumpLaw::Gaussian ? 2.0 : tail_alpha;
  s.c = 1.0;
  s.validate();
  return s;
}

void StableSpec::validate() const {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  switch (flavor) {
    case Flavor::Brownian:
      if (alpha != 2.0) throw ParameterError("Brownian flavor requires alpha = 2");
      check_scale(c);
      break;
    case Flavor::Isotropic:
      check_alpha(alpha);
      check_scale(c);
      break;
    case Flavor::CompoundPoissonHeavy:
      if (cpp.jump_law == JumpLaw::Pareto &&
          !(cpp.tail_alpha > 0.0 && cpp.tail_alpha < 2.0)) {
        throw ParameterError("compound Poisson tail_alpha must lie in (0, 2)");
      }
      if (!(cpp.jump_rate >= 0.0) || !std::isfinite(cpp.jump_rate)) {
        throw ParameterError("compound Poisson jump_rate must be finite and >= 0");
      }
      if (!cpp.drift.empty() && static_cast<int>(cpp.drift.size()) != d) {
        throw ParameterError("drift must have d components");
      }
      break;
  }
}

double sample_stable_1d(double alpha, double scale, Rng& rng) {
  check_alpha(alpha);
  check_scale(scale);
  if (alpha == 2.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    return scale * std::numbers::sqrt2 * n(rng);
  }
  const double v = kPi * (open_uniform(rng) - 0.5);
  if (alpha == 1.0) return scale * std::tan(v);
  const double w = standard_exponential(rng);
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return scale * x;
}

double sample_positive_stable(double a, Rng& rng) {
  if (!(a > 0.0 && a < 1.0)) throw ParameterError("positive stable index must lie in (0, 1)");
  const double u = kPi * open_uniform(rng);
  const double e = standard_exponential(rng);
  return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) *
         std::pow(std::sin((1.0 - a) * u) / e, (1.0 - a) / a);
}

IncrementSampler::IncrementSampler(const StableSpec& spec, double dt)
    : d_(spec.d), alpha_(spec.alpha), gaussian_(spec.alpha == 2.0) {
  spec.validate();
  if (!spec.is_stable()) throw ParameterError("increment sampler needs an Isotropic or Brownian spec");
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  // X(dt) =d dt^{1/alpha} sqrt(2 A') G with A' = c^{2/alpha} S (or A' = c when alpha = 2).
  gauss_scale_ = std::sqrt(2.0 * std::pow(spec.c, 2.0 / spec.alpha)) * std::pow(dt, 1.0 / spec.alpha);
}

void IncrementSampler::next(Rng& rng, double* out) {
  double s = gauss_scale_;
  if (!gaussian_) s *= std::sqrt(sample_positive_stable(0.5 * alpha_, rng));
  for (int k = 0; k < d_; ++k) out[k] = s * normal_(rng);
}

Eigen::VectorXd sample_isotropic_stable_vec(const StableSpec& spec, Rng& rng) {
  if (spec.flavor == Flavor::CompoundPoissonHeavy) {
    throw ParameterError("isotropic sampler needs an Isotropic or Brownian spec");
  }
  IncrementSampler inc(spec, 1.0);
  Eigen::VectorXd x(spec.d);
  inc.next(rng, x.data());
  return x;
}

PathSample sample_walk_path(const StableSpec& spec, std::size_t n, double horizon, Rng& rng) {
  if (n == 0) throw ParameterError("walk needs at least one step");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  const double dt = horizon / static_cast<double>(n);
  IncrementSampler inc(spec, dt);
  PathSample path;
  path.times.resize(n + 1);
  path.points.setZero(spec.d, static_cast<Eigen::Index>(n + 1));
  path.times[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    path.times[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    auto col = path.points.col(static_cast<Eigen::Index>(i));
    inc.next(rng, col.data());
    col += path.points.col(static_cast<Eigen::Index>(i - 1));
  }
  return path;
}

void sample_cpp_jump(const StableSpec& spec, Rng& rng, double* out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = spec.d;
  if (spec.cpp.jump_law == JumpLaw::Gaussian) {
    for (int k = 0; k < d; ++k) out[k] = normal(rng);
    return;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      out[k] = normal(rng);
      norm2 += out[k] * out[k];
    }
  } while (norm2 == 0.0);
  const double r = std::pow(open_uniform(rng), -1.0 / spec.cpp.tail_alpha);
  const double f = r / std::sqrt(norm2);
  for (int k = 0; k < d; ++k) out[k] *= f;
}

PathSample sample_cpp_path(const StableSpec& spec, double horizon, Rng& rng) {
  spec.validate();
  if (spec.flavor != Flavor::CompoundPoissonHeavy) {
    throw ParameterError("compound Poisson sampler needs a CompoundPoissonHeavy spec");
  }
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
  const int d = spec.d;
  Eigen::VectorXd drift = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < static_cast<int>(spec.cpp.drift.size()); ++k) drift[k] = spec.cpp.drift[k];

  std::vector<double> times{0.0};
  std::vector<double> coords(static_cast<std::size_t>(d), 0.0);
  Eigen::VectorXd pos = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd jump(d);
  auto record = [&](double t) {
    times.push_back(t);
    coords.insert(coords.end(), pos.data(), pos.data() + d);
  };

  double t = 0.0;
  if (spec.cpp.jump_rate > 0.0) {
    std::exponential_distribution<double> wait(spec.cpp.jump_rate);
    for (;;) {
      const double next = t + wait(rng);
      if (next >= horizon) break;
      pos += (next - t) * drift;
      t = next;
      record(t);  // left limit X(t-)
      sample_cpp_jump(spec, rng, jump.data());
      pos += jump;
      record(t);
    }
  }
  pos += (horizon - t) * drift;
  record(horizon);

  PathSample path;
  path.times = std::move(times);
  path.points = Eigen::Map<const Eigen::MatrixXd>(coords.data(), d,
                                                  static_cast<Eigen::Index>(path.times.size()));
  return path;
}

PathSample resample_on_grid(const PathSample& path, std::size_t n) {
  if (path.size() == 0) throw ParameterError("empty path");
  if (n == 0) throw ParameterError("grid needs at least one step");
  const double horizon = path.horizon();
  PathSample out;
  out.times.resize(n + 1);
  out.points.resize(path.dim(), static_cast<Eigen::Index>(n + 1));
  std::size_t k = 0;  // last recorded index with time <= t
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(n);
    out.times[i] = t;
    while (k + 1 < path.size() && path.times[k + 1] <= t) ++k;
    if (k + 1 < path.size() && path.times[k + 1] > path.times[k]) {
      const double w = (t - path.times[k]) / (path.times[k + 1] - path.times[k]);
      // Linear between a post-jump value and the next left limit.
      out.points.col(static_cast<Eigen::Index>(i)) =
          (1.0 - w) * path.points.col(static_cast<Eigen::Index>(k)) +
          w * path.points.col(static_cast<Eigen::Index>(k + 1));
    } else {
      out.points.col(static_cast<Eigen::Index>(i)) = path.points.col(static_cast<Eigen::Index>(k));
    }
  }
  return out;
}

}  // namespace levyhull
