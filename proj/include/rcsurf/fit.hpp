#pragma once

#include <functional>
#include <vector>

#include "rcsurf/diagnostics.hpp"
#include "rcsurf/surface.hpp"
#include "rcsurf/types.hpp"

namespace rcsurf {

/// Analytic hemisphere parametrization over [-1, 1]^2: the square-to-disk
/// map (u sqrt(1 - v^2/2), v sqrt(1 - u^2/2)) lifted radially onto the unit
/// sphere. Every point lies on the sphere, the pole is the image of (0, 0),
/// the boundary covers the equator, and the four corners are rounded with
/// limit normals pointing at the corner images.
Vec3 hemisphere_reference(double u, double v);

/// Position with exact first and second partials of the hemisphere map.
JetSample hemisphere_jet(double u, double v);

/// Limit normal of the hemisphere at a domain corner (equator position).
Vec3 hemisphere_corner_normal(Corner c);

using TargetMap = std::function<Vec3(double, double)>;

/// Rounded-corner constraint for one corner: barycentric weights of the
/// corner condition and the prescribed unit limit normal that fixes the
/// orientation of the limit tangent plane.
struct CornerConstraintSpec {
  Corner id = Corner::U0V0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  Vec3 normal = Vec3::UnitZ();
};

struct FitProblem {
  KnotVector ku, kv;
  TargetMap target;
  std::vector<CornerConstraintSpec> constraints;
  int quad_points = 0;    // Gauss points per span; 0 picks degree+2
  bool two_step = false;  // boundary curves first, then interior
};

struct L2System {
  Eigen::MatrixXd gram;     // N x N over the full control-point set
  Eigen::MatrixXd moments;  // N x 3
  double target_sq = 0;     // integral of |target|^2 over the domain
};

/// Gram matrix and moment vectors of the L2-projection objective.
L2System assemble_l2(const FitProblem& p);

/// Six scalar equality rows for one corner over the stacked unknowns
/// [x-block; y-block; z-block]: the vector corner condition (3 rows) and
/// <t*, n> = <r*, n> = <s*, n> = 0.
struct ConstraintRows {
  Eigen::MatrixXd C;  // m x 3N
  Eigen::VectorXd d;  // m
};

ConstraintRows corner_constraint_rows(const CornerConstraintSpec& spec,
                                      const KnotVector& ku, const KnotVector& kv);

struct KktSolution {
  Eigen::MatrixXd x;            // N x k
  Eigen::VectorXd multipliers;  // one per kept constraint row
  std::vector<int> dropped_rows;
  double kkt_residual = 0;
};

/// Minimizes sum_c (1/2 x_c' G x_c - m_c' x_c) subject to C vec(x) = d,
/// where vec(x) stacks the k columns of x block after block. Dependent
/// constraint rows are detected and dropped. Solved as one dense symmetric
/// indefinite system.
KktSolution solve_kkt(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& moments,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& d);

struct FitCornerFlags {
  Corner id = Corner::U0V0;
  bool antiparallel_ok = false;
  bool coplanar_ok = false;
  bool onesided_ok = false;
};

struct FitReport {
  TensorSurface surface;
  double l2_residual = 0;        // sqrt of the integrated squared error
  double max_error = 0;          // dense-sample sup of |x - target|
  double constraint_residual = 0;
  std::vector<FitCornerFlags> corner_flags;
};

/// L2-projection of the target onto the spline space, with the corner rows
/// enforced exactly through Lagrange multipliers. In two-step mode the
/// boundary control points are fitted to the target's boundary curves first
/// (corner rows supported on boundary unknowns act here), then the interior
/// is fitted with the boundary held fixed.
FitReport fit_surface(const FitProblem& p);

/// 1D L2-projection of a curve onto a clamped spline space; returns the
/// control points as rows.
Eigen::MatrixXd fit_curve_1d(const KnotVector& kv,
                             const std::function<Vec3(double)>& target,
                             int quad_points = 0);

/// Hemisphere experiment problem: bi-degree (n, n), dyadic knot spacing
/// 2^-level on [-1, 1]^2, optionally with the four rounded-corner
/// constraints (alpha = 1/2, exact sphere normals).
FitProblem hemisphere_problem(int degree, int level, bool rcc,
                              bool two_step = true, int quad_points = 0);

/// Max angle between the fitted normal and the exact sphere normal over a
/// (grid+1)^2 sample, skipping the four corner parameters.
double hemisphere_max_normal_angle(const TensorSurface& s, int grid = 200);

}  // namespace rcsurf
