#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "levyhull/errors.hpp"
#include "levyhull/hull.hpp"

namespace levyhull {

namespace {

using Vec2 = Eigen::Vector2d;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// a is kept between o and b only if it lies more than eps from the line ob.
// Comparing the raw cross product with a length^2 tolerance instead would
// discard genuine vertices along finely sampled curves.
bool strictly_left(const Vec2& o, const Vec2& a, const Vec2& b, double eps) {
  return cross(o, a, b) > eps * (b - o).norm();
}

// Drops points strictly inside the polygon spanned by the extreme points in
// the eight compass directions. Cheap, and removes most of a random walk.
std::vector<Vec2> akl_toussaint(const std::vector<Vec2>& pts, double tol) {
  std::array<std::size_t, 8> ext{};
  std::array<double, 8> best;
  best.fill(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].x();
    const double y = pts[i].y();
    // Directions in counterclockwise order starting at +x.
    const std::array<double, 8> score{x, x + y, y, y - x, -x, -x - y, -y, x - y};
    for (std::size_t k = 0; k < 8; ++k) {
      if (score[k] > best[k]) {
        best[k] = score[k];
        ext[k] = i;
      }
    }
  }
  std::vector<Vec2> poly;
  for (std::size_t k = 0; k < 8; ++k) {
    const Vec2& q = pts[ext[k]];
    if (poly.empty() || q != poly.back()) poly.push_back(q);
  }
  while (poly.size() > 1 && poly.front() == poly.back()) poly.pop_back();
  if (poly.size() < 3) return pts;

  std::vector<Vec2> kept;
  kept.reserve(pts.size() / 4 + 8);
  for (const Vec2& p : pts) {
    bool inside = true;
    for (std::size_t k = 0; k < poly.size() && inside; ++k) {
      inside = cross(poly[k], poly[(k + 1) % poly.size()], p) > tol;
    }
    if (!inside) kept.push_back(p);
  }
  return kept;
}

}  // namespace

Polytope hull2d(const Eigen::MatrixXd& points) {
  if (points.rows() != 2) throw ParameterError("hull2d expects a 2 x N point matrix");
  if (points.cols() == 0) throw ParameterError("hull2d needs at least one point");

  const Vec2 lo = points.rowwise().minCoeff();
  const Vec2 hi = points.rowwise().maxCoeff();
  Polytope out;
  out.dim = 2;
  out.scale = (hi - lo).norm();
  const double eps = kGeomEps * out.scale;
  const double tol = eps * out.scale;  // cross products carry length^2

  std::vector<Vec2> pts(static_cast<std::size_t>(points.cols()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) pts[static_cast<std::size_t>(i)] = points.col(i);
  if (pts.size() > 64) pts = akl_toussaint(pts, tol);

  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Vec2> hull;
  if (pts.size() <= 2) {
    hull = pts;
  } else {
    hull.resize(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
      while (k >= 2 && !strictly_left(hull[k - 2], hull[k - 1], p, eps)) --k;
      hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
      while (k >= lower && !strictly_left(hull[k - 2], hull[k - 1], pts[i], eps)) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
  }
  if (hull.size() == 2 && (hull[0] - hull[1]).norm() <= eps) hull.resize(1);

  out.affine_dim = hull.size() >= 3 ? 2 : static_cast<int>(hull.size()) - 1;
  out.vertices.resize(2, static_cast<Eigen::Index>(hull.size()));
  for (std::size_t i = 0; i < hull.size(); ++i) out.vertices.col(static_cast<Eigen::Index>(i)) = hull[i];
  return out;
}

Polytope convex_hull(const Eigen::MatrixXd& points) {
  switch (points.rows()) {
    case 2:
      return hull2d(points);
    case 3:
      return hull3d(points);
    default:
      throw DimensionError("exact hulls are implemented for d in {2, 3} only");
  }
}

}  // namespace levyhull
