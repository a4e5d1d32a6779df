#include "rcsurf/corner.hpp"

#include <cmath>

namespace rcsurf {

std::string corner_kind_name(CornerKind k) {
  switch (k) {
    case CornerKind::Regular: return "Regular";
    case CornerKind::Rounded: return "Rounded";
    case CornerKind::DiscontinuousIndependent: return "DiscontinuousIndependent";
    case CornerKind::DiscontinuousOpposite: return "DiscontinuousOpposite";
    case CornerKind::Degenerate: return "Degenerate";
    case CornerKind::NotAntiparallel: return "NotAntiparallel";
  }
  throw std::logic_error("corner_kind_name: invalid kind");
}

namespace {

double angle_between(const Vec3& a, const Vec3& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return M_PI;
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

FrameResult corner_frame(const CornerJet& jet, const CornerTolerances& tol) {
  FrameResult res;
  const double lambda = jet.xi10.norm();
  const double mu = jet.xi01.norm();
  const double scale = std::max(jet.scale, jet.magnitude());
  if (lambda <= tol.partial_norm_rel * scale || mu <= tol.partial_norm_rel * scale) {
    res.failure = FrameFailure::NotAntiparallel;
    res.antiparallel_residual = M_PI;
    return res;
  }
  res.antiparallel_residual = angle_between(jet.xi10, -jet.xi01);
  if (res.antiparallel_residual > tol.antiparallel_angle) {
    res.failure = FrameFailure::NotAntiparallel;
    return res;
  }

  CornerFrame f;
  f.lambda = lambda;
  f.mu = mu;
  f.t = jet.xi10 / lambda;
  f.r = mu * jet.xi20 + lambda * jet.xi11;
  f.s = lambda * jet.xi02 + mu * jet.xi11;
  const Vec3 txr = f.t.cross(f.r);
  const double txr_norm = txr.norm();
  if (txr_norm <= tol.partial_norm_rel * std::max(f.r.norm(), scale)) {
    res.failure = FrameFailure::NormalUndefined;
    return res;
  }
  f.n = txr / txr_norm;
  f.c = f.n.cross(f.t);
  f.rho = f.c.dot(f.r);
  f.sigma = f.c.dot(f.s);
  res.frame = f;
  return res;
}

CornerClassification classify_corner(const CornerJet& jet, const CornerTolerances& tol) {
  CornerClassification cls;
  const double scale = std::max(jet.scale, jet.magnitude());
  const double l = jet.xi10.norm(), m = jet.xi01.norm();
  cls.antiparallel_residual = angle_between(jet.xi10, -jet.xi01);

  if (l <= tol.partial_norm_rel * scale || m <= tol.partial_norm_rel * scale) {
    cls.kind = CornerKind::NotAntiparallel;
    cls.antiparallel_residual = M_PI;
    return cls;
  }
  if (cls.antiparallel_residual > tol.antiparallel_angle) {
    // parallel same-direction partials are still a (different) singularity
    cls.kind = angle_between(jet.xi10, jet.xi01) <= tol.antiparallel_angle
                   ? CornerKind::NotAntiparallel
                   : CornerKind::Regular;
    return cls;
  }

  const Vec3 t = jet.xi10 / l;
  const Vec3 r = m * jet.xi20 + l * jet.xi11;
  const Vec3 s = l * jet.xi02 + m * jet.xi11;
  const double rs = std::max(r.norm() * s.norm(), 1e-300);
  Eigen::Matrix3d M;
  M.col(0) = r;
  M.col(1) = s;
  M.col(2) = t;
  cls.coplanarity_residual = std::abs(M.determinant()) / rs;
  cls.quad_product = t.cross(r).dot(t.cross(s));
  cls.quad_product_scaled = cls.quad_product / rs;

  if (cls.coplanarity_residual > tol.coplanarity_rel) {
    cls.kind = CornerKind::DiscontinuousIndependent;
    return cls;
  }
  if (cls.quad_product_scaled > tol.degenerate_band_rel) {
    cls.kind = CornerKind::Rounded;
    const FrameResult fr = corner_frame(jet, tol);
    if (fr.frame) cls.frame = fr.frame;
    return cls;
  }
  cls.kind = cls.quad_product_scaled < -tol.degenerate_band_rel
                 ? CornerKind::DiscontinuousOpposite
                 : CornerKind::Degenerate;
  return cls;
}

SplineCornerReport spline_corner_conditions(const TensorSurface& s, Corner c,
                                            const CornerTolerances& tol) {
  const int n1 = s.ku().degree(), n2 = s.kv().degree();
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("spline_corner_conditions: degrees must be >= 2");
  const CornerLayout L = corner_layout(s, c);
  auto P = [&](const int* idx) -> const Vec3& { return s.cp(idx[0], idx[1]); };
  const Vec3 p00 = P(L.p00), p10 = P(L.p10), p01 = P(L.p01);
  const Vec3 p20 = P(L.p20), p11 = P(L.p11), p02 = P(L.p02);

  SplineCornerReport rep;
  rep.t_star = p10 - p01;
  const double tn = rep.t_star.norm();
  if (tn <= tol.partial_norm_rel * std::max(s.net_diameter(), 1e-300)) {
    rep.antiparallel_ok = false;  // t* = 0: p10 == p01
    rep.segment_residual = (p00 - p10).norm();
    return rep;
  }

  // least-squares weight placing p00 on the segment [p10, p01]
  rep.alpha1 = (p00 - p01).dot(rep.t_star) / (tn * tn);
  rep.alpha2 = 1.0 - rep.alpha1;
  rep.segment_residual = (p00 - rep.alpha1 * p10 - rep.alpha2 * p01).norm();
  rep.antiparallel_ok = rep.segment_residual <= tol.off_segment_rel * tn &&
                        rep.alpha1 > 0.0 && rep.alpha1 < 1.0;

  rep.r_star = (n1 - 1) * L.tau_u1 * rep.alpha1 * (p20 - p00) +
               n1 * L.tau_u2 * rep.alpha2 * (p11 - p00);
  rep.s_star = (n2 - 1) * L.tau_v1 * rep.alpha2 * (p02 - p00) +
               n2 * L.tau_v2 * rep.alpha1 * (p11 - p00);

  Eigen::Matrix3d M;
  M.col(0) = rep.r_star;
  M.col(1) = rep.s_star;
  M.col(2) = rep.t_star;
  const double rs = std::max(rep.r_star.norm() * rep.s_star.norm() * tn, 1e-300);
  rep.coplanarity_residual = std::abs(M.determinant()) / rs;
  rep.coplanar_ok = rep.coplanarity_residual <= tol.coplanarity_rel;

  rep.quad_product = rep.t_star.cross(rep.r_star).dot(rep.t_star.cross(rep.s_star));
  rep.onesided_ok =
      rep.quad_product > tol.degenerate_band_rel * rs * tn;  // scaled strict positivity
  return rep;
}

Vec2 limit_tangent_projection(const CornerFrame& frame, const Vec3& point,
                              const Vec3& origin) {
  const Vec3 w = point - origin;
  // t and c are orthogonal to n, so the n-component drops out of the dots.
  return Vec2(frame.t.dot(w), frame.c.dot(w));
}

}  // namespace rcsurf
