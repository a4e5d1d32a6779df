#pragma once

#include <optional>
#include <string>

#include "rcsurf/surface.hpp"
#include "rcsurf/types.hpp"

namespace rcsurf {

/// Scale-aware gates for the corner classification. Residuals are compared
/// against these thresholds times the natural scale of the quantity.
struct CornerTolerances {
  double antiparallel_angle = 1e-7;  // radians between xi10 and -xi01
  double partial_norm_rel = 1e-12;   // nonzero gate for first partials, x scale
  double coplanarity_rel = 1e-8;     // |det[r,s,t]| <= tol * |r||s| (t unit)
  double degenerate_band_rel = 1e-10;  // |<txr,txs>| band around zero
  double off_segment_rel = 1e-8;     // corner-on-segment residual, x |t*|
};

enum class CornerKind {
  Regular,
  Rounded,
  DiscontinuousIndependent,
  DiscontinuousOpposite,
  Degenerate,
  NotAntiparallel,
};

std::string corner_kind_name(CornerKind k);

/// Frame of a rounded corner: common tangent t, factors lambda, mu, the
/// vectors r, s, the limit normal n, cross vector c and cross components
/// rho = <c,r>, sigma = <c,s>.
struct CornerFrame {
  Vec3 t, r, s, n, c;
  double lambda = 0, mu = 0, rho = 0, sigma = 0;
};

enum class FrameFailure { None, NotAntiparallel, NormalUndefined };

struct FrameResult {
  std::optional<CornerFrame> frame;
  FrameFailure failure = FrameFailure::None;
  double antiparallel_residual = 0;  // angle between xi10 and -xi01
};

/// Builds the corner frame from a jet. Fails with NotAntiparallel when the
/// first partials are zero, same-direction, or off antiparallel beyond the
/// angle gate; with NormalUndefined when ||t x r|| vanishes.
FrameResult corner_frame(const CornerJet& jet, const CornerTolerances& tol = {});

struct CornerClassification {
  CornerKind kind = CornerKind::Regular;
  double antiparallel_residual = 0;   // radians from exact antiparallelism
  double coplanarity_residual = 0;    // |det[r,s,t]| / (|r||s|)
  double quad_product = 0;            // <t x r, t x s>
  double quad_product_scaled = 0;     // quad_product / (|r||s|)
  std::optional<CornerFrame> frame;   // present for Rounded corners
};

CornerClassification classify_corner(const CornerJet& jet,
                                     const CornerTolerances& tol = {});

/// Control-point conditions for a rounded corner of a clamped spline
/// surface: corner point on the segment [p10, p01] with weights in (0,1),
/// linear dependence of r*, s*, t*, and positivity of the quadruple product.
struct SplineCornerReport {
  double alpha1 = 0, alpha2 = 0;
  Vec3 r_star = Vec3::Zero(), s_star = Vec3::Zero(), t_star = Vec3::Zero();
  bool antiparallel_ok = false;
  bool coplanar_ok = false;
  bool onesided_ok = false;
  double segment_residual = 0;     // distance of p00 from the alpha-combination
  double coplanarity_residual = 0; // scaled |det[r*, s*, t*]|
  double quad_product = 0;         // <t* x r*, t* x s*>

  bool all_ok() const { return antiparallel_ok && coplanar_ok && onesided_ok; }
};

SplineCornerReport spline_corner_conditions(const TensorSurface& s, Corner c,
                                            const CornerTolerances& tol = {});

/// Coordinates of (Id - n n^t)(point - origin) in the (t, c) basis of the
/// limit tangent plane.
Vec2 limit_tangent_projection(const CornerFrame& frame, const Vec3& point,
                              const Vec3& origin);

}  // namespace rcsurf
