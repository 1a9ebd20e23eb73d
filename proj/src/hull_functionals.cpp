#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <Eigen/Dense>

#include "levyhull/closed_form.hpp"
#include "levyhull/errors.hpp"
#include "levyhull/hull.hpp"

namespace levyhull {

namespace {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

double segment_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + d1 / (d1 - d3) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + d2 / (d2 - d6) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Signed distances of x to the edge lines of a counterclockwise polygon;
// positive inside. Returns the minimum.
double polygon_min_edge_distance(const Eigen::MatrixXd& v, const Vec2& x) {
  const Eigen::Index n = v.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 a = v.col(i);
    const Vec2 b = v.col((i + 1) % n);
    const Vec2 e = b - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    best = std::min(best, (e.x() * (x.y() - a.y()) - e.y() * (x.x() - a.x())) / len);
  }
  return best;
}

double boundary_distance(const Eigen::MatrixXd& v, const Eigen::VectorXd& x) {
  const Eigen::Index n = v.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(x, v.col(i), v.col((i + 1) % n)));
  }
  return best;
}

// Orthonormal frame (origin, e1, e2, normal) of a flat 3-d polygon.
struct PlaneFrame {
  Vec3 origin, e1, e2, normal;
};

PlaneFrame plane_frame(const Eigen::MatrixXd& v) {
  Vec3 newell = Vec3::Zero();
  const Eigen::Index n = v.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    newell += Vec3(v.col(i)).cross(Vec3(v.col((i + 1) % n)));
  }
  PlaneFrame f;
  f.origin = v.col(0);
  f.normal = newell.normalized();
  f.e1 = (Vec3(v.col(1)) - f.origin).normalized();
  f.e2 = f.normal.cross(f.e1);
  return f;
}

Eigen::MatrixXd to_plane(const PlaneFrame& f, const Eigen::MatrixXd& v) {
  Eigen::MatrixXd out(2, v.cols());
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    const Vec3 d = Vec3(v.col(i)) - f.origin;
    out(0, i) = d.dot(f.e1);
    out(1, i) = d.dot(f.e2);
  }
  return out;
}

double facet_area(const Polytope& p, const std::array<int, 3>& t) {
  const Vec3 a = p.vertices.col(t[0]);
  return 0.5 * (Vec3(p.vertices.col(t[1])) - a).cross(Vec3(p.vertices.col(t[2])) - a).norm();
}

}  // namespace

IntrinsicVolumes intrinsic_volumes_2d(const Polytope& p) {
  if (p.dim != 2) throw ParameterError("intrinsic_volumes_2d needs a planar polytope");
  const Eigen::Index n = p.vertices.cols();
  double perimeter = 0.0, twice_area = 0.0;
  if (n >= 2) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec2 a = p.vertices.col(i);
      const Vec2 b = p.vertices.col((i + 1) % n);
      perimeter += (b - a).norm();
      twice_area += a.x() * b.y() - a.y() * b.x();
    }
  }
  return {{1.0, 0.5 * perimeter, n >= 3 ? 0.5 * std::abs(twice_area) : 0.0}};
}

IntrinsicVolumes intrinsic_volumes_3d(const Polytope& p) {
  if (p.dim != 3 || !p.full_dimensional() || p.facets.empty()) {
    throw DimensionError("intrinsic_volumes_3d needs a full-dimensional 3-d polytope");
  }
  double volume6 = 0.0, area = 0.0, mean_width_sum = 0.0;
  std::unordered_map<std::uint64_t, int> first_face;
  first_face.reserve(p.facets.size() * 2);
  for (std::size_t f = 0; f < p.facets.size(); ++f) {
    const auto& t = p.facets[f];
    const Vec3 a = p.vertices.col(t[0]), b = p.vertices.col(t[1]), c = p.vertices.col(t[2]);
    volume6 += a.dot(b.cross(c));
    area += 0.5 * (b - a).cross(c - a).norm();
    for (int k = 0; k < 3; ++k) {
      int u = t[static_cast<std::size_t>(k)], w = t[static_cast<std::size_t>((k + 1) % 3)];
      if (u > w) std::swap(u, w);
      const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(w);
      const auto [it, inserted] = first_face.try_emplace(key, static_cast<int>(f));
      if (inserted) continue;
      // atan2 rather than acos: near-coplanar neighbours (split quads) give
      // angles of rounding size instead of sqrt(rounding).
      const Vec3 n1 = p.normals.col(it->second), n2 = p.normals.col(static_cast<Eigen::Index>(f));
      const double angle = std::atan2(n1.cross(n2).norm(), n1.dot(n2));
      mean_width_sum += (p.vertices.col(u) - p.vertices.col(w)).norm() * angle;
    }
  }
  return {{1.0, mean_width_sum / (2.0 * std::numbers::pi), 0.5 * area, std::abs(volume6) / 6.0}};
}

IntrinsicVolumes intrinsic_volumes(const Polytope& p) {
  if (p.dim == 2) return intrinsic_volumes_2d(p);
  if (p.dim != 3) throw DimensionError("intrinsic volumes need d in {2, 3}");
  if (p.full_dimensional()) return intrinsic_volumes_3d(p);
  // Flat hull: vertices are a cyclic polygon (or a segment / point).
  const Eigen::Index n = p.vertices.cols();
  double perimeter = 0.0;
  Vec3 twice_area = Vec3::Zero();
  if (n >= 2) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec3 a = p.vertices.col(i), b = p.vertices.col((i + 1) % n);
      perimeter += (b - a).norm();
      twice_area += a.cross(b);
    }
  }
  return {{1.0, 0.5 * perimeter, n >= 3 ? 0.5 * twice_area.norm() : 0.0, 0.0}};
}

double gram_det(const Eigen::MatrixXd& vectors) {
  const Eigen::Index j = vectors.cols();
  if (j > vectors.rows()) throw ParameterError("gram_det needs j <= d");
  if (j == 0) return 1.0;
  const Eigen::MatrixXd g = vectors.transpose() * vectors;
  return std::sqrt(std::max(0.0, g.determinant()));
}

double zonotope_intrinsic_volume(const Eigen::MatrixXd& generators, int j) {
  const int d = static_cast<int>(generators.rows());
  const int m = static_cast<int>(generators.cols());
  if (j < 1 || j > d) throw ParameterError("zonotope_intrinsic_volume needs 1 <= j <= d");
  if (m > kMaxZonotopeGenerators) throw ResourceError("too many zonotope generators (cap 25)");
  if (j > m) return 0.0;

  // Canonical generator order and orientation make the result exactly
  // invariant under permutations and sign flips.
  std::vector<Eigen::VectorXd> gens;
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd u = generators.col(k);
    for (int i = 0; i < d; ++i) {
      if (u[i] != 0.0) {
        if (u[i] < 0.0) u = -u;
        break;
      }
    }
    gens.push_back(u);
  }
  std::sort(gens.begin(), gens.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });

  std::vector<double> terms;
  std::vector<int> idx(static_cast<std::size_t>(j));
  for (int i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd sub(d, j);
  for (;;) {
    for (int i = 0; i < j; ++i) sub.col(i) = gens[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    terms.push_back(gram_det(sub));
    int i = j - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - j + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < j; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
  std::sort(terms.begin(), terms.end());
  long double total = 0.0L;
  for (double t : terms) total += t;
  return static_cast<double>(total);
}

Polytope zonotope_hull(const Eigen::MatrixXd& generators) {
  const Eigen::Index m = generators.cols();
  if (m > 20) throw ResourceError("zonotope_hull enumerates 2^m points; cap m <= 20");
  const std::size_t count = std::size_t{1} << m;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(generators.rows(), static_cast<Eigen::Index>(count));
  for (std::size_t mask = 0; mask < count; ++mask) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (mask & (std::size_t{1} << k)) pts.col(static_cast<Eigen::Index>(mask)) += generators.col(k);
    }
  }
  return convex_hull(pts);
}

EstimateResult projection_Vj_estimate(const Polytope& p, int j, std::size_t samples, Rng& rng) {
  if (p.dim != 3 || !p.full_dimensional()) {
    throw DimensionError("projection_Vj_estimate needs a full-dimensional 3-d polytope");
  }
  if (j != 1 && j != 2) throw ParameterError("projection_Vj_estimate supports j in {1, 2}");
  if (samples < 2) throw ParameterError("projection_Vj_estimate needs at least 2 samples");

  // Kubota: V_j(P) = C(3,j) kappa_3 / (kappa_j kappa_{3-j}) * E V_j(P | E), E a
  // uniform random j-subspace. Both constants equal 2 in R^3.
  const double constant = closed_form::binomial(3, j) * closed_form::kappa(3) /
                          (closed_form::kappa(j) * closed_form::kappa(3 - j));
  std::vector<double> areas(p.facets.size());
  for (std::size_t f = 0; f < p.facets.size(); ++f) areas[f] = facet_area(p, p.facets[f]);

  std::normal_distribution<double> normal;
  RunningStats stats;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec3 u(normal(rng), normal(rng), normal(rng));
    u.normalize();
    double value = 0.0;
    if (j == 1) {
      const Eigen::VectorXd proj = p.vertices.transpose() * u;
      value = proj.maxCoeff() - proj.minCoeff();
    } else {
      // Area of the projection onto u^perp: half the facet-area-weighted |<n,u>|.
      for (std::size_t f = 0; f < areas.size(); ++f) {
        value += areas[f] * std::abs(p.normals.col(static_cast<Eigen::Index>(f)).dot(u));
      }
      value *= 0.5;
    }
    stats.add(constant * value);
  }
  return stats.to_estimate(0);
}

double support_value(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& u) {
  if (u.size() != p.vertices.rows()) throw ParameterError("support_value: dimension mismatch");
  if (p.vertices.cols() == 0) throw ParameterError("support_value: empty polytope");
  return (p.vertices.transpose() * u).maxCoeff();
}

double distance_to_polytope(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != p.vertices.rows()) throw ParameterError("distance_to_polytope: dimension mismatch");
  const Eigen::Index n = p.vertices.cols();
  if (n == 1) return (x - p.vertices.col(0)).norm();
  if (n == 2 && p.affine_dim <= 1) return segment_distance(x, p.vertices.col(0), p.vertices.col(1));

  if (p.dim == 2) {
    if (polygon_min_edge_distance(p.vertices, x) >= 0.0) return 0.0;
    return boundary_distance(p.vertices, x);
  }
  if (!p.full_dimensional()) {
    const PlaneFrame f = plane_frame(p.vertices);
    const Vec3 xv = x;
    const Vec3 d = xv - f.origin;
    const Vec2 local(d.dot(f.e1), d.dot(f.e2));
    Eigen::MatrixXd poly = to_plane(f, p.vertices);
    if (polygon_min_edge_distance(poly, local) >= 0.0 ||
        polygon_min_edge_distance(poly.rowwise().reverse(), local) >= 0.0) {
      return std::abs(d.dot(f.normal));
    }
    return boundary_distance(p.vertices, x);
  }
  const Vec3 xv = x;
  bool inside = true;
  for (std::size_t f = 0; f < p.facets.size() && inside; ++f) {
    const Eigen::Index fi = static_cast<Eigen::Index>(f);
    inside = p.normals.col(fi).dot(xv - Vec3(p.vertices.col(p.facets[f][0]))) <= 0.0;
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : p.facets) {
    const Vec3 q = closest_on_triangle(xv, p.vertices.col(t[0]), p.vertices.col(t[1]), p.vertices.col(t[2]));
    best = std::min(best, (q - xv).norm());
  }
  return best;
}

double depth_inside(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != p.vertices.rows()) throw ParameterError("depth_inside: dimension mismatch");
  if (!p.full_dimensional()) return 0.0;
  if (p.dim == 2) return std::max(0.0, polygon_min_edge_distance(p.vertices, x));
  const Vec3 xv = x;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < p.facets.size(); ++f) {
    const Eigen::Index fi = static_cast<Eigen::Index>(f);
    best = std::min(best, -p.normals.col(fi).dot(xv - Vec3(p.vertices.col(p.facets[f][0]))));
  }
  return std::max(0.0, best);
}

double hausdorff(const Polytope& a, const Polytope& b) {
  if (a.dim != b.dim) throw ParameterError("hausdorff: dimension mismatch");
  double h = 0.0;
  for (Eigen::Index i = 0; i < a.vertices.cols(); ++i) h = std::max(h, distance_to_polytope(b, a.vertices.col(i)));
  for (Eigen::Index i = 0; i < b.vertices.cols(); ++i) h = std::max(h, distance_to_polytope(a, b.vertices.col(i)));
  return h;
}

nlohmann::json to_json(const Polytope& p) {
  nlohmann::json j;
  j["dim"] = p.dim;
  j["affine_dim"] = p.affine_dim;
  auto verts = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.vertices.cols(); ++i) {
    auto v = nlohmann::json::array();
    for (Eigen::Index r = 0; r < p.vertices.rows(); ++r) v.push_back(p.vertices(r, i));
    verts.push_back(v);
  }
  j["vertices"] = verts;
  auto facets = nlohmann::json::array();
  for (const auto& t : p.facets) facets.push_back({t[0], t[1], t[2]});
  j["facets"] = facets;
  return j;
}

}  // namespace levyhull
