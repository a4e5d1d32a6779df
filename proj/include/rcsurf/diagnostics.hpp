#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcsurf/corner.hpp"
#include "rcsurf/surface.hpp"
#include "rcsurf/types.hpp"

namespace rcsurf {

/// Unit surface normal nu = (x_u x x_v) / ||x_u x x_v||. Throws
/// DegeneratePointError when the cross product vanishes relative to
/// ||x_u|| ||x_v|| (e.g. exactly at a rounded corner).
Vec3 normal_vector(const TensorSurface& s, double u, double v);

/// Point with first and second partials; the common currency between
/// spline surfaces and analytic reference maps.
struct JetSample {
  Vec3 x, xu, xv, xuu, xuv, xvv;
};

JetSample jet_sample(const TensorSurface& s, double u, double v);

/// First/second fundamental forms, shape operator S = G^{-1} B and its
/// eigenvalues (the principal curvatures).
struct FundamentalForms {
  Mat2 G, B, S;
  double kappa1 = 0, kappa2 = 0;  // |kappa1| >= |kappa2|
};

FundamentalForms fundamental_forms(const JetSample& j);
FundamentalForms fundamental_forms(const TensorSurface& s, double u, double v);

/// Scale sweep of some corner quantity plus its fitted log-log rate.
struct ProbeSeries {
  std::vector<double> parameters;  // strictly decreasing, positive
  std::vector<double> values;
  double fitted_rate = 0;
};

/// Least-squares slope of log(values) vs log(parameters), discarding the
/// `drop_largest` coarsest scales as preasymptotic.
double fit_log_slope(const std::vector<double>& parameters,
                     const std::vector<double>& values, int drop_largest = 2);

/// `count` log-spaced scales from hi down to lo.
std::vector<double> log_spaced_scales(double lo, double hi, int count);

/// Angle between nu(alpha * direction) and the limit normal of the corner,
/// per scale. The corner must classify Rounded; direction lives in the open
/// positive quadrant of the corner-local frame.
ProbeSeries normal_convergence_probe(const TensorSurface& s, Corner c,
                                     const Vec2& direction,
                                     const std::vector<double>& alphas);

/// Same probe against a caller-supplied reference normal (used for fitted
/// surfaces where the enforced limit normal is known a priori).
ProbeSeries normal_convergence_probe(const TensorSurface& s, Corner c,
                                     const Vec2& direction,
                                     const std::vector<double>& alphas,
                                     const Vec3& reference_normal);

/// Ratio ||x_u x x_v|| / (rho u + sigma v) along the diagonal; tends to 1,
/// and fitted_rate tracks the decay of |ratio - 1|.
ProbeSeries cross_norm_asymptotics(const TensorSurface& s, Corner c,
                                   const std::vector<double>& alphas);

/// Gauss quadrature of |kappa_1|^p + |kappa_2|^p over the corner-local
/// domain with an [eps, .] x [eps, .] cut, spans subdivided geometrically
/// (ratio 2) toward the corner.
double curvature_integral(const TensorSurface& s, Corner c, double p, double eps);

struct InjectivityWitness {
  Vec2 eta0, eta1;             // parameter points (corner-local coordinates)
  double projected_distance;   // ||Pi(eta0) - Pi(eta1)|| after refinement
  double parameter_separation;
};

struct InjectivityReport {
  std::optional<InjectivityWitness> witness;
  int grid_density = 0;
  double min_separation = 0;  // pairs closer than this were not considered
};

/// Samples the tangent-plane projection Pi on a grid, hashes for collision
/// candidates, and refines them by Gauss-Newton. Absence of a witness is a
/// sampling statement at the reported resolution, not a proof.
InjectivityReport injectivity_probe(const TensorSurface& s, const CornerFrame& frame,
                                    const Vec3& origin, int grid_density);

/// Corner convenience: frame and origin from the corner jet (must be Rounded).
InjectivityReport injectivity_probe(const TensorSurface& s, Corner c,
                                    int grid_density);

/// Exact Bezier representation (degrees taken from the coefficient table)
/// of the polynomial sum_{j,k} coef[j][k] u^j v^k on [0,1]^2.
TensorSurface bezier_from_polynomial(const std::vector<std::vector<Vec3>>& coef);

/// Built-in example surfaces: self_intersect, rounded_quadratic,
/// rounded_cubic, discont_independent, discont_opposite, degenerate.
TensorSurface make_fixture(const std::string& name);
std::vector<std::string> fixture_names();

struct FieldSample {
  double u = 0, v = 0;
  Vec3 x = Vec3::Zero();
  Vec3 nu = Vec3::Zero();
  double kappa1 = 0, kappa2 = 0;
  double isophote = 0;  // <nu, d> for the configured direction d
  bool regular = true;
};

/// Uniform (nu+1) x (nv+1) sampling of position, normal, curvatures and the
/// isophote indicator; singular samples are flagged instead of failing.
std::vector<FieldSample> sample_field(const TensorSurface& s, int nu, int nv,
                                      const Vec3& iso_direction);

}  // namespace rcsurf
