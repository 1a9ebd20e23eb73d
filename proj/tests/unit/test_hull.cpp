#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

#include <Eigen/LU>

#include "doctest.h"
#include "levyhull/closed_form.hpp"
#include "levyhull/errors.hpp"
#include "levyhull/hull.hpp"

using namespace levyhull;
using std::numbers::pi;

namespace {

Eigen::MatrixXd cols(std::initializer_list<std::initializer_list<double>> pts) {
  const auto rows = static_cast<Eigen::Index>(pts.begin()->size());
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(pts.size()));
  Eigen::Index c = 0;
  for (const auto& p : pts) {
    Eigen::Index r = 0;
    for (double v : p) m(r++, c) = v;
    ++c;
  }
  return m;
}

Eigen::MatrixXd cube_corners(double side = 1.0) {
  Eigen::MatrixXd m(3, 8);
  for (int i = 0; i < 8; ++i) m.col(i) << side * (i & 1), side * ((i >> 1) & 1), side * ((i >> 2) & 1);
  return m;
}

Eigen::MatrixXd regular_tetrahedron() {
  // Edge length 1.
  Eigen::MatrixXd m = cols({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
  return m / (2.0 * std::sqrt(2.0));
}

Eigen::MatrixXd random_points(int d, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(d, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < d; ++r) m(r, c) = nd(rng);
  return m;
}

// Every edge of a closed, consistently oriented mesh appears once in each direction.
bool closed_oriented(const Polytope& p) {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& f : p.facets)
    for (int k = 0; k < 3; ++k) ++edges[{f[k], f[(k + 1) % 3]}];
  for (const auto& [e, count] : edges) {
    if (count != 1) return false;
    const auto it = edges.find({e.second, e.first});
    if (it == edges.end() || it->second != 1) return false;
  }
  return !p.facets.empty();
}

// Every input point lies within tolerance of the hull.
bool contains_all(const Polytope& p, const Eigen::MatrixXd& pts) {
  for (Eigen::Index c = 0; c < pts.cols(); ++c)
    if (distance_to_polytope(p, pts.col(c)) > 1e-9 * std::max(1.0, p.scale)) return false;
  return true;
}

}  // namespace

TEST_CASE("planar hulls") {
  const Polytope tri = hull2d(cols({{0, 0}, {1, 0}, {0, 1}, {0.1, 0.1}}));
  CHECK(tri.num_vertices() == 3);
  CHECK(tri.affine_dim == 2);
  const IntrinsicVolumes tv = intrinsic_volumes(tri);
  CHECK(tv[2] == doctest::Approx(0.5));

  const Polytope pt = hull2d(cols({{2, 3}}));
  CHECK(pt.num_vertices() == 1);
  CHECK(pt.affine_dim == 0);
  CHECK(intrinsic_volumes(pt).values == std::vector<double>{1.0, 0.0, 0.0});

  CHECK_THROWS_AS(hull2d(Eigen::MatrixXd(2, 0)), ParameterError);

  // Collinear and duplicate points are dropped; orientation is counterclockwise.
  const Polytope sq = hull2d(cols({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 1}, {0, 0.5}}));
  REQUIRE(sq.num_vertices() == 4);
  double signed_area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto a = sq.vertices.col(static_cast<Eigen::Index>(i));
    const auto b = sq.vertices.col(static_cast<Eigen::Index>((i + 1) % 4));
    signed_area += a[0] * b[1] - a[1] * b[0];
  }
  CHECK(signed_area > 0.0);

  // Uniform points in the unit disk: the hull vertices are extreme points of
  // the set and sit near the rim.
  Rng rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd disk(2, 10'000);
  for (Eigen::Index c = 0; c < disk.cols();) {
    const double x = u(rng), y = u(rng);
    if (x * x + y * y <= 1.0) disk.col(c++) << x, y;
  }
  const Polytope hd = hull2d(disk);
  for (Eigen::Index c = 0; c < hd.vertices.cols(); ++c) CHECK(hd.vertices.col(c).norm() >= 0.9);
  CHECK(contains_all(hd, disk));

  // Brute-force extreme-point oracle on a small subsample: a point is a vertex
  // iff it is not in any triangle of the others.
  const Eigen::MatrixXd small = disk.leftCols(60);
  const Polytope hs = hull2d(small);
  int extreme = 0;
  for (Eigen::Index i = 0; i < small.cols(); ++i) {
    bool inside = false;
    for (Eigen::Index a = 0; a < small.cols() && !inside; ++a)
      for (Eigen::Index b = a + 1; b < small.cols() && !inside; ++b)
        for (Eigen::Index c = b + 1; c < small.cols() && !inside; ++c) {
          if (a == i || b == i || c == i) continue;
          auto cross = [&](Eigen::Index p, Eigen::Index q) {
            const Eigen::Vector2d e = small.col(q) - small.col(p), w = small.col(i) - small.col(p);
            return e[0] * w[1] - e[1] * w[0];
          };
          const double s1 = cross(a, b), s2 = cross(b, c), s3 = cross(c, a);
          inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
        }
    extreme += !inside;
  }
  CHECK(static_cast<std::size_t>(extreme) == hs.num_vertices());

  // Large input goes through the prefilter; same answer as the tail without it.
  const Eigen::MatrixXd many = random_points(2, 50'000, 8);
  const Polytope hm = hull2d(many);
  CHECK(contains_all(hm, many));
  CHECK(intrinsic_volumes(hm)[2] == doctest::Approx(intrinsic_volumes(hull2d(hm.vertices))[2]).epsilon(1e-12));

  // A finely sampled circle keeps every sample as a vertex.
  const int m = 32768;
  Eigen::MatrixXd circle(2, m);
  for (int a = 0; a < m; ++a) circle.col(a) << std::cos(2.0 * pi * a / m), std::sin(2.0 * pi * a / m);
  const Polytope hc = hull2d(circle);
  CHECK(hc.num_vertices() == static_cast<std::size_t>(m));
  CHECK(intrinsic_volumes(hc)[2] == doctest::Approx(0.5 * m * std::sin(2.0 * pi / m)).epsilon(1e-12));
}

TEST_CASE("planar intrinsic volumes") {
  CHECK(intrinsic_volumes_2d(hull2d(cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))).values == std::vector<double>{1, 2, 1});
  const IntrinsicVolumes seg = intrinsic_volumes_2d(hull2d(cols({{0, 0}, {3, 0}, {1, 0}})));
  CHECK(seg[1] == doctest::Approx(3.0));
  CHECK(seg[2] == 0.0);

  Eigen::MatrixXd hex(2, 6);
  for (int k = 0; k < 6; ++k) hex.col(k) << std::cos(k * pi / 3.0), std::sin(k * pi / 3.0);
  const IntrinsicVolumes hv = intrinsic_volumes_2d(hull2d(hex));
  CHECK(hv[0] == 1.0);
  CHECK(hv[1] == doctest::Approx(3.0));
  CHECK(hv[2] == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0));

  // Homogeneity V_j(lambda P) = lambda^j V_j(P) and monotonicity under inclusion.
  const Eigen::MatrixXd pts = random_points(2, 200, 3);
  const IntrinsicVolumes a = intrinsic_volumes(hull2d(pts));
  const IntrinsicVolumes b = intrinsic_volumes(hull2d(2.5 * pts));
  CHECK(b[1] == doctest::Approx(2.5 * a[1]).epsilon(1e-12));
  CHECK(b[2] == doctest::Approx(6.25 * a[2]).epsilon(1e-12));
  const IntrinsicVolumes sub = intrinsic_volumes(hull2d(pts.leftCols(50)));
  CHECK(sub[1] <= a[1]);
  CHECK(sub[2] <= a[2]);
}

TEST_CASE("spatial hulls") {
  Eigen::MatrixXd cube(3, 9);
  cube << cube_corners(), Eigen::Vector3d(0.5, 0.5, 0.5);
  const Polytope pc = hull3d(cube);
  CHECK(pc.num_vertices() == 8);
  CHECK(pc.facets.size() == 12);
  CHECK(closed_oriented(pc));
  const IntrinsicVolumes cv = intrinsic_volumes_3d(pc);
  CHECK(cv[0] == 1.0);
  CHECK(cv[1] == doctest::Approx(3.0));
  CHECK(cv[2] == doctest::Approx(3.0));
  CHECK(cv[3] == doctest::Approx(1.0));

  const Polytope pt = hull3d(regular_tetrahedron());
  CHECK(pt.facets.size() == 4);
  CHECK(closed_oriented(pt));
  const IntrinsicVolumes tv = intrinsic_volumes_3d(pt);
  CHECK(tv[3] == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));
  CHECK(tv[2] == doctest::Approx(std::sqrt(3.0) / 2.0));
  // 6 edges, exterior angle pi - arccos(1/3), over 2 pi.
  CHECK(tv[1] == doctest::Approx(6.0 * (pi - std::acos(1.0 / 3.0)) / (2.0 * pi)));

  // Outward normals: every vertex lies on the inner side of every facet.
  for (std::size_t f = 0; f < pc.facets.size(); ++f) {
    const Eigen::Vector3d n = pc.normals.col(static_cast<Eigen::Index>(f));
    CHECK(n.norm() == doctest::Approx(1.0));
    const double off = n.dot(pc.vertices.col(pc.facets[f][0]));
    for (Eigen::Index v = 0; v < pc.vertices.cols(); ++v) CHECK(n.dot(pc.vertices.col(v)) <= off + 1e-12);
  }

  for (int n : {20, 300, 5000}) {
    const Eigen::MatrixXd pts = random_points(3, n, static_cast<std::uint64_t>(n));
    const Polytope p = hull3d(pts);
    CHECK(closed_oriented(p));
    CHECK(contains_all(p, pts));
    // Euler: V - E + F = 2 with E = 3F/2 for a triangulated sphere.
    CHECK(static_cast<long>(p.num_vertices()) - static_cast<long>(p.facets.size()) / 2 == 2);
    // Each hull vertex is strictly extreme: removing it shrinks the volume.
    if (n == 20) {
      const double vol = intrinsic_volumes_3d(p)[3];
      for (Eigen::Index v = 0; v < p.vertices.cols(); ++v) {
        Eigen::MatrixXd rest(3, p.vertices.cols() - 1);
        rest << p.vertices.leftCols(v), p.vertices.rightCols(p.vertices.cols() - v - 1);
        CHECK(intrinsic_volumes_3d(hull3d(rest))[3] < vol);
      }
    }
  }

  // Monotone under inclusion, homogeneous of degree j.
  const Eigen::MatrixXd pts = random_points(3, 400, 77);
  const IntrinsicVolumes big = intrinsic_volumes(hull3d(pts));
  const IntrinsicVolumes small = intrinsic_volumes(hull3d(pts.leftCols(100)));
  const IntrinsicVolumes scaled = intrinsic_volumes(hull3d(0.5 * pts));
  for (int j = 1; j <= 3; ++j) {
    CHECK(small[j] <= big[j]);
    CHECK(scaled[j] == doctest::Approx(std::pow(0.5, j) * big[j]).epsilon(1e-10));
  }
  // Idempotence: hull of the hull vertices is the same body.
  const Polytope h1 = hull3d(pts);
  const Polytope h2 = hull3d(h1.vertices);
  CHECK(h2.num_vertices() == h1.num_vertices());
  CHECK(hausdorff(h1, h2) < 1e-12);
}

TEST_CASE("degenerate spatial inputs") {
  const Polytope p0 = hull3d(cols({{1, 2, 3}, {1, 2, 3}}));
  CHECK(p0.affine_dim == 0);
  CHECK(intrinsic_volumes(p0).values == std::vector<double>{1, 0, 0, 0});

  const Polytope p1 = hull3d(cols({{0, 0, 0}, {1, 1, 1}, {0.5, 0.5, 0.5}, {2, 2, 2}}));
  CHECK(p1.affine_dim == 1);
  CHECK(p1.num_vertices() == 2);
  CHECK(intrinsic_volumes(p1)[1] == doctest::Approx(2.0 * std::sqrt(3.0)));

  // Unit square tilted into the plane x = z.
  const Polytope p2 = hull3d(cols({{0, 0, 0}, {1, 0, 1}, {0, 1, 0}, {1, 1, 1}, {0.5, 0.5, 0.5}}));
  CHECK(p2.affine_dim == 2);
  CHECK(p2.num_vertices() == 4);
  CHECK(p2.facets.empty());
  const IntrinsicVolumes v2 = intrinsic_volumes(p2);
  CHECK(v2[1] == doctest::Approx(1.0 + std::sqrt(2.0)));
  CHECK(v2[2] == doctest::Approx(std::sqrt(2.0)));
  CHECK(v2[3] == 0.0);
  CHECK_THROWS_AS(intrinsic_volumes_3d(p2), DimensionError);
  CHECK_THROWS_AS(hull3d(Eigen::MatrixXd(3, 0)), ParameterError);
  CHECK_THROWS_AS(convex_hull(Eigen::MatrixXd::Zero(4, 3)), DimensionError);
}

TEST_CASE("projection estimator of V_1 and V_2") {
  Rng rng(12);
  const Polytope cube = hull3d(cube_corners());
  for (int j : {1, 2}) {
    const EstimateResult e = projection_Vj_estimate(cube, j, 100'000, rng);
    CHECK(std::abs(e.mean - 3.0) <= 3.0 * e.std_error);
  }
  const Polytope tet = hull3d(regular_tetrahedron());
  const IntrinsicVolumes tv = intrinsic_volumes_3d(tet);
  for (int j : {1, 2}) {
    const EstimateResult e = projection_Vj_estimate(tet, j, 100'000, rng);
    CHECK(std::abs(e.mean - tv[j]) <= 3.0 * e.std_error);
  }
  // Steiner cross-check on a random polytope: the exact functionals and
  // the projection averages agree.
  const Polytope rp = hull3d(random_points(3, 60, 4));
  const IntrinsicVolumes rv = intrinsic_volumes_3d(rp);
  for (int j : {1, 2}) {
    const EstimateResult e = projection_Vj_estimate(rp, j, 50'000, rng);
    CHECK(std::abs(e.mean - rv[j]) <= 4.0 * e.std_error);
  }
  CHECK_THROWS_AS(projection_Vj_estimate(cube, 3, 10, rng), ParameterError);
}

TEST_CASE("Gram determinants") {
  CHECK(gram_det(cols({{1, 0, 0}, {0, 1, 0}})) == doctest::Approx(1.0));
  CHECK(gram_det(cols({{1, 2, 3}, {2, 4, 6}})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gram_det(cols({{1, 0}, {1, 1}})) == doctest::Approx(1.0));
  CHECK(gram_det(cols({{3, 4}})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(gram_det(Eigen::MatrixXd::Ones(2, 3)), ParameterError);

  // Hadamard: D_j <= product of column norms; and D_j is |det| when j = d.
  const Eigen::MatrixXd m = random_points(4, 3, 5);
  CHECK(gram_det(m) <= m.col(0).norm() * m.col(1).norm() * m.col(2).norm());
  const Eigen::MatrixXd sq = random_points(3, 3, 6);
  CHECK(gram_det(sq) == doctest::Approx(std::abs(sq.determinant())).epsilon(1e-10));
}

TEST_CASE("zonotope intrinsic volumes") {
  const Eigen::MatrixXd e12 = cols({{1, 0}, {0, 1}});
  CHECK(zonotope_intrinsic_volume(e12, 2) == doctest::Approx(1.0));
  CHECK(zonotope_intrinsic_volume(e12, 1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(zonotope_intrinsic_volume(e12, 0), ParameterError);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::MatrixXd g2 = random_points(2, 5, seed);
    const IntrinsicVolumes h2 = intrinsic_volumes(zonotope_hull(g2));
    for (int j : {1, 2}) CHECK(zonotope_intrinsic_volume(g2, j) == doctest::Approx(h2[j]).epsilon(1e-9));

    const Eigen::MatrixXd g3 = random_points(3, 6, 100 + seed);
    const IntrinsicVolumes h3 = intrinsic_volumes(zonotope_hull(g3));
    for (int j : {1, 2, 3}) CHECK(zonotope_intrinsic_volume(g3, j) == doctest::Approx(h3[j]).epsilon(1e-9));
  }

  // Invariant under generator order and sign (the segment [0,-u] is a translate of [0,u]).
  Eigen::MatrixXd g = random_points(3, 7, 55);
  const double v = zonotope_intrinsic_volume(g, 2);
  Eigen::MatrixXd perm = g.rowwise().reverse();
  perm.col(3) *= -1.0;
  CHECK(zonotope_intrinsic_volume(perm, 2) == v);

  CHECK_THROWS_AS(zonotope_intrinsic_volume(random_points(2, 26, 1), 1), ResourceError);
  CHECK_THROWS_AS(zonotope_hull(random_points(2, 21, 1)), ResourceError);
  CHECK_THROWS_AS(zonotope_intrinsic_volume(e12, 3), ParameterError);
}

TEST_CASE("support, distance and depth") {
  const Polytope sq = hull2d(cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(support_value(sq, Eigen::Vector2d(1, 1)) == doctest::Approx(2.0));
  CHECK(support_value(sq, Eigen::Vector2d(-1, 0)) == doctest::Approx(0.0));
  CHECK(distance_to_polytope(sq, Eigen::Vector2d(0.5, 0.5)) == 0.0);
  CHECK(distance_to_polytope(sq, Eigen::Vector2d(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(distance_to_polytope(sq, Eigen::Vector2d(0.5, -3)) == doctest::Approx(3.0));
  CHECK(depth_inside(sq, Eigen::Vector2d(0.5, 0.25)) == doctest::Approx(0.25));
  CHECK(depth_inside(sq, Eigen::Vector2d(0, 0.5)) == doctest::Approx(0.0));
  CHECK(depth_inside(sq, Eigen::Vector2d(3, 3)) == 0.0);

  const Polytope cube = hull3d(cube_corners());
  CHECK(distance_to_polytope(cube, Eigen::Vector3d(0.5, 0.5, 3)) == doctest::Approx(2.0));
  CHECK(distance_to_polytope(cube, Eigen::Vector3d(2, 2, 2)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(depth_inside(cube, Eigen::Vector3d(0.5, 0.5, 0.5)) == doctest::Approx(0.5));

  const nlohmann::json j = to_json(cube);
  CHECK(j["dim"] == 3);
  CHECK(j["vertices"].size() == 8);
  CHECK(j["facets"].size() == 12);
}

TEST_CASE("Hausdorff distance") {
  const Polytope sq = hull2d(cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
  CHECK(hausdorff(sq, sq) == 0.0);
  const Polytope shifted = hull2d(cols({{0.3, 0}, {1.3, 0}, {1.3, 1}, {0.3, 1}}));
  CHECK(hausdorff(sq, shifted) == doctest::Approx(0.3));
  const Polytope big = hull2d(cols({{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
  CHECK(hausdorff(sq, big) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hausdorff(big, sq) == doctest::Approx(std::sqrt(2.0)));

  // Brute force over dense boundary samples of the larger square.
  double brute = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = 2.0 * k / 400.0;
    for (const Eigen::Vector2d p : {Eigen::Vector2d(t, 0), Eigen::Vector2d(t, 2), Eigen::Vector2d(0, t), Eigen::Vector2d(2, t)})
      brute = std::max(brute, distance_to_polytope(sq, p));
  }
  CHECK(hausdorff(sq, big) == doctest::Approx(brute).epsilon(1e-9));

  CHECK(hausdorff(hull3d(cube_corners()), hull3d(cube_corners(2.0))) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(hausdorff(sq, hull3d(cube_corners())), ParameterError);
}
