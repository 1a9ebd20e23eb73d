#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include <Eigen/Geometry>

#include "levyhull/errors.hpp"
#include "levyhull/hull.hpp"

namespace levyhull {

namespace {

using Vec3 = Eigen::Vector3d;

struct Face {
  std::array<int, 3> v;
  Vec3 normal;
  double offset;
  bool alive;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

class IncrementalHull {
 public:
  IncrementalHull(const std::vector<Vec3>& pts, double eps) : pts_(pts), eps_(eps) {}

  void build(const std::array<int, 4>& simplex) {
    const Vec3 centroid =
        0.25 * (pts_[simplex[0]] + pts_[simplex[1]] + pts_[simplex[2]] + pts_[simplex[3]]);
    const int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& t : tri) {
      int a = simplex[t[0]], b = simplex[t[1]], c = simplex[t[2]];
      const Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
      if (n.dot(centroid - pts_[a]) > 0.0) std::swap(b, c);
      add_face(a, b, c);
    }
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (std::find(simplex.begin(), simplex.end(), i) != simplex.end()) continue;
      insert(i);
    }
  }

  Polytope result(double scale) const {
    Polytope out;
    out.dim = 3;
    out.affine_dim = 3;
    out.scale = scale;
    std::unordered_map<int, int> remap;
    std::vector<int> order;
    for (const Face& f : faces_) {
      if (!f.alive) continue;
      std::array<int, 3> idx{};
      for (int k = 0; k < 3; ++k) {
        auto [it, inserted] = remap.try_emplace(f.v[static_cast<std::size_t>(k)],
                                                static_cast<int>(order.size()));
        if (inserted) order.push_back(f.v[static_cast<std::size_t>(k)]);
        idx[static_cast<std::size_t>(k)] = it->second;
      }
      out.facets.push_back(idx);
    }
    out.vertices.resize(3, static_cast<Eigen::Index>(order.size()));
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.vertices.col(static_cast<Eigen::Index>(i)) = pts_[static_cast<std::size_t>(order[i])];
    }
    out.normals.resize(3, static_cast<Eigen::Index>(out.facets.size()));
    for (std::size_t f = 0; f < out.facets.size(); ++f) {
      const auto& t = out.facets[f];
      const Vec3 a = out.vertices.col(t[0]);
      const Vec3 n = (Vec3(out.vertices.col(t[1])) - a).cross(Vec3(out.vertices.col(t[2])) - a);
      const double len = n.norm();
      out.normals.col(static_cast<Eigen::Index>(f)) = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
    }
    return out;
  }

 private:
  double distance(const Face& f, const Vec3& p) const { return f.normal.dot(p) - f.offset; }

  void add_face(int a, int b, int c) {
    Vec3 n = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]);
    const double len = n.norm();
    if (len > 0.0) n /= len;
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(Face{{a, b, c}, n, n.dot(pts_[a]), true});
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    ++alive_;
  }

  void kill_face(int id) {
    Face& f = faces_[static_cast<std::size_t>(id)];
    for (int k = 0; k < 3; ++k) edges_.erase(edge_key(f.v[static_cast<std::size_t>(k)], f.v[static_cast<std::size_t>((k + 1) % 3)]));
    f.alive = false;
    --alive_;
  }

  void compact() {
    std::vector<Face> live;
    live.reserve(static_cast<std::size_t>(alive_));
    for (const Face& f : faces_) {
      if (f.alive) live.push_back(f);
    }
    faces_ = std::move(live);
    edges_.clear();
    for (std::size_t id = 0; id < faces_.size(); ++id) {
      const auto& v = faces_[id].v;
      for (int k = 0; k < 3; ++k) {
        edges_[edge_key(v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>((k + 1) % 3)])] = static_cast<int>(id);
      }
    }
  }

  void insert(int pi) {
    const Vec3& p = pts_[static_cast<std::size_t>(pi)];
    int seed = -1;
    for (std::size_t id = 0; id < faces_.size(); ++id) {
      if (faces_[id].alive && distance(faces_[id], p) > eps_) {
        seed = static_cast<int>(id);
        break;
      }
    }
    if (seed < 0) return;

    ++stamp_;
    if (mark_.size() < faces_.size()) mark_.resize(faces_.size() * 2, 0);
    std::vector<int> visible{seed};
    std::vector<std::pair<int, int>> horizon;
    mark_[static_cast<std::size_t>(seed)] = stamp_;
    for (std::size_t s = 0; s < visible.size(); ++s) {
      const auto v = faces_[static_cast<std::size_t>(visible[s])].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[static_cast<std::size_t>(k)];
        const int b = v[static_cast<std::size_t>((k + 1) % 3)];
        const auto it = edges_.find(edge_key(b, a));
        if (it == edges_.end()) continue;
        const int twin = it->second;
        if (mark_[static_cast<std::size_t>(twin)] == stamp_) continue;
        if (distance(faces_[static_cast<std::size_t>(twin)], p) > eps_) {
          mark_[static_cast<std::size_t>(twin)] = stamp_;
          visible.push_back(twin);
        } else {
          horizon.emplace_back(a, b);
        }
      }
    }
    for (int id : visible) kill_face(id);
    for (const auto& [a, b] : horizon) add_face(a, b, pi);
    if (faces_.size() > 64 && static_cast<std::size_t>(alive_) * 2 < faces_.size()) compact();
  }

  const std::vector<Vec3>& pts_;
  double eps_;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int alive_ = 0;
};

Polytope flat_hull(const std::vector<Vec3>& pts, const Vec3& origin, const Vec3& e1, const Vec3& e2,
                   double scale) {
  Eigen::MatrixXd planar(2, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 d = pts[i] - origin;
    planar(0, static_cast<Eigen::Index>(i)) = d.dot(e1);
    planar(1, static_cast<Eigen::Index>(i)) = d.dot(e2);
  }
  const Polytope p2 = hull2d(planar);
  Polytope out;
  out.dim = 3;
  out.affine_dim = p2.affine_dim;
  out.scale = scale;
  out.vertices.resize(3, p2.vertices.cols());
  for (Eigen::Index i = 0; i < p2.vertices.cols(); ++i) {
    out.vertices.col(i) = origin + p2.vertices(0, i) * e1 + p2.vertices(1, i) * e2;
  }
  return out;
}

}  // namespace

namespace {

// `scale` is that of the original input, so tolerances do not change when the
// prefilter shrinks the point set.
Polytope hull3d_points(const std::vector<Vec3>& pts, double scale, int depth) {
  const double eps = kGeomEps * scale;

  auto argmax = [&](auto&& score) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      const double s = score(pts[static_cast<std::size_t>(i)]);
      if (s > best_score) {
        best_score = s;
        best = i;
      }
    }
    return std::pair{best, best_score};
  };

  const int i0 = static_cast<int>(std::min_element(pts.begin(), pts.end(),
                                                   [](const Vec3& a, const Vec3& b) {
                                                     return std::tie(a.x(), a.y(), a.z()) <
                                                            std::tie(b.x(), b.y(), b.z());
                                                   }) -
                                  pts.begin());
  const Vec3 p0 = pts[static_cast<std::size_t>(i0)];
  const auto [i1, d1] = argmax([&](const Vec3& p) { return (p - p0).norm(); });
  if (d1 <= eps) {
    Polytope out;
    out.dim = 3;
    out.affine_dim = 0;
    out.scale = scale;
    out.vertices = p0;
    return out;
  }
  const Vec3 axis = (pts[static_cast<std::size_t>(i1)] - p0) / d1;
  const auto [i2, d2] = argmax([&](const Vec3& p) { return (p - p0).cross(axis).norm(); });
  if (d2 <= eps) {
    double lo = 0.0, hi = 0.0;
    Vec3 plo = p0, phi = p0;
    for (const Vec3& p : pts) {
      const double t = (p - p0).dot(axis);
      if (t < lo) { lo = t; plo = p; }
      if (t > hi) { hi = t; phi = p; }
    }
    Polytope out;
    out.dim = 3;
    out.affine_dim = 1;
    out.scale = scale;
    out.vertices.resize(3, 2);
    out.vertices.col(0) = plo;
    out.vertices.col(1) = phi;
    return out;
  }
  const Vec3 normal = axis.cross(pts[static_cast<std::size_t>(i2)] - p0).normalized();
  const auto [i3, d3] = argmax([&](const Vec3& p) { return std::abs((p - p0).dot(normal)); });
  if (d3 <= eps) {
    return flat_hull(pts, p0, axis, normal.cross(axis), scale);
  }

  if (pts.size() > 256 && depth < 3) {
    // Discard points strictly inside the hull of the extreme points in the 26
    // directions of {-1,0,1}^3; typically only a few percent survive.
    Eigen::MatrixXd ext(3, 26);
    int col = 0;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        for (int c = -1; c <= 1; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          const Vec3 dir(a, b, c);
          ext.col(col++) = pts[static_cast<std::size_t>(argmax([&](const Vec3& p) { return p.dot(dir); }).first)];
        }
      }
    }
    const Polytope core = hull3d(ext);
    if (core.full_dimensional()) {
      std::vector<Vec3> kept;
      std::vector<double> offsets(core.facets.size());
      for (std::size_t f = 0; f < core.facets.size(); ++f) {
        offsets[f] = core.normals.col(static_cast<Eigen::Index>(f)).dot(core.vertices.col(core.facets[f][0]));
      }
      for (const Vec3& p : pts) {
        bool inside = true;
        for (std::size_t f = 0; f < core.facets.size() && inside; ++f) {
          inside = core.normals.col(static_cast<Eigen::Index>(f)).dot(p) - offsets[f] < -eps;
        }
        if (!inside) kept.push_back(p);
      }
      // Heavy-tailed walks can leave a flat or tiny core that removes
      // nothing; recurse only on progress.
      if (kept.size() < pts.size()) return hull3d_points(kept, scale, depth + 1);
    }
  }

  IncrementalHull hull(pts, eps);
  hull.build({i0, i1, i2, i3});
  return hull.result(scale);
}

}  // namespace

Polytope hull3d(const Eigen::MatrixXd& points) {
  if (points.rows() != 3) throw ParameterError("hull3d expects a 3 x N point matrix");
  if (points.cols() == 0) throw ParameterError("hull3d needs at least one point");
  std::vector<Vec3> pts(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) pts[static_cast<std::size_t>(i)] = points.col(i);
  const double scale = (points.rowwise().maxCoeff() - points.rowwise().minCoeff()).norm();
  return hull3d_points(pts, scale, 0);
}

}  // namespace levyhull
