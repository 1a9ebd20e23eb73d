#pragma once

// Exact convex hulls in R^2 / R^3 and their intrinsic volumes, Gram
// determinants, zonotope intrinsic volumes and the Hausdorff distance.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "levyhull/stable.hpp"
#include "levyhull/stats.hpp"

namespace levyhull {

/// Relative tolerance of orientation and containment predicates; the
/// absolute tolerance is kGeomEps * diameter of the input.
inline constexpr double kGeomEps = 1e-9;

/// Convex polytope in R^2 or R^3.
///
/// dim = 2: vertices are counterclockwise, collinear points removed.
/// dim = 3, full-dimensional: `facets` are outward oriented triangles with
/// unit normals in `normals`. Lower-dimensional inputs keep `facets` empty; a
/// flat 3-d hull stores its polygon vertices in cyclic order.
struct Polytope {
  int dim = 2;
  int affine_dim = 0;
  Eigen::MatrixXd vertices;  // dim x V
  std::vector<std::array<int, 3>> facets;
  Eigen::MatrixXd normals;  // 3 x F
  double scale = 0.0;       // bounding-box diagonal of the input points

  std::size_t num_vertices() const { return static_cast<std::size_t>(vertices.cols()); }
  bool full_dimensional() const { return affine_dim == dim; }
  double eps() const { return kGeomEps * scale; }
};

/// (V_0, ..., V_d).
struct IntrinsicVolumes {
  std::vector<double> values;

  double operator[](std::size_t j) const { return values.at(j); }
  std::size_t size() const { return values.size(); }
};

/// Monotone-chain hull of a 2 x N point matrix.
Polytope hull2d(const Eigen::MatrixXd& points);

/// Incremental hull of a 3 x N point matrix.
Polytope hull3d(const Eigen::MatrixXd& points);

/// Dispatches on points.rows().
Polytope convex_hull(const Eigen::MatrixXd& points);

inline Polytope convex_hull(const PathSample& path) { return convex_hull(path.points); }

/// (1, perimeter/2, area) of a planar polytope.
IntrinsicVolumes intrinsic_volumes_2d(const Polytope& p);

/// (1, V_1, V_2, V_3) of a full-dimensional 3-d polytope. V_1 is
/// (1/2pi) sum over edges of length times exterior dihedral angle.
/// Throws DimensionError for flat input.
IntrinsicVolumes intrinsic_volumes_3d(const Polytope& p);

/// Intrinsic volumes of any polytope; flat 3-d hulls use their planar values.
IntrinsicVolumes intrinsic_volumes(const Polytope& p);

/// sqrt(det(M^T M)) for the d x j matrix M of column vectors, clamped at 0.
double gram_det(const Eigen::MatrixXd& vectors);

/// Largest generator count accepted by zonotope_intrinsic_volume.
inline constexpr int kMaxZonotopeGenerators = 25;

/// V_j of the zonotope sum_k [0, u_k]: the sum of D_j over all j-subsets of
/// generators (columns of `generators`).
double zonotope_intrinsic_volume(const Eigen::MatrixXd& generators, int j);

/// Vertex-enumeration construction of sum_k [0, u_k]: the hull of all 2^m
/// subset sums.
Polytope zonotope_hull(const Eigen::MatrixXd& generators);

/// Projection-averaging estimate of V_j (j = 1, 2) of a full-dimensional
/// polytope in R^3 from uniformly random directions.
EstimateResult projection_Vj_estimate(const Polytope& p, int j, std::size_t samples, Rng& rng);

/// h(P, u) = max over vertices of <v, u>.
double support_value(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& u);

/// Euclidean distance from x to the polytope (0 inside).
double distance_to_polytope(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Distance from x to the relative boundary of the polytope when x is inside
/// it, 0 when x is on the boundary or outside. Lower-dimensional polytopes
/// have empty interior and return 0.
double depth_inside(const Polytope& p, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Hausdorff distance between two polytopes of the same ambient dimension.
double hausdorff(const Polytope& a, const Polytope& b);

nlohmann::json to_json(const Polytope& p);

}  // namespace levyhull
