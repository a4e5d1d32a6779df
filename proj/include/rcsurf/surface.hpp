#pragma once

#include <vector>

#include "rcsurf/knots.hpp"
#include "rcsurf/types.hpp"

namespace rcsurf {

/// Tensor-product B-spline surface over clamped knot vectors. The control
/// net is stored row-major with the row index running along u:
/// cp(j, k) multiplies b_u[j](u) * b_v[k](v).
class TensorSurface {
 public:
  TensorSurface(KnotVector ku, KnotVector kv, std::vector<Vec3> net);

  const KnotVector& ku() const { return ku_; }
  const KnotVector& kv() const { return kv_; }
  int n1() const { return ku_.num_basis(); }
  int n2() const { return kv_.num_basis(); }

  const Vec3& cp(int j, int k) const { return net_[static_cast<std::size_t>(j) * n2() + k]; }
  Vec3& cp(int j, int k) { return net_[static_cast<std::size_t>(j) * n2() + k]; }
  const std::vector<Vec3>& net() const { return net_; }
  std::vector<Vec3>& net() { return net_; }

  /// Partial derivative d^{ju+jv} x / du^{ju} dv^{jv} at (u, v).
  /// Orders (0, 0) give the surface point itself.
  Vec3 eval(double u, double v, int ju = 0, int jv = 0) const;

  /// Largest control-net bounding-box edge; convenient length scale.
  double net_diameter() const;

  TensorSurface reversed_u() const;
  TensorSurface reversed_v() const;

  /// Surface with the roles of u and v exchanged (net transposed).
  TensorSurface transposed() const;

  /// Reparametrized copy with the given corner moved to (u_min, v_min)
  /// and both parameters increasing into the domain.
  TensorSurface corner_local(Corner c) const;

 private:
  KnotVector ku_, kv_;
  std::vector<Vec3> net_;
};

/// Second-order Taylor data xi_{j,k} = d^{j+k} x / du^j dv^k of a patch at a
/// domain corner, expressed in the local frame where the corner sits at the
/// span origin and both parameters increase into the domain.
struct CornerJet {
  Vec3 xi00 = Vec3::Zero();
  Vec3 xi10 = Vec3::Zero();
  Vec3 xi01 = Vec3::Zero();
  Vec3 xi20 = Vec3::Zero();
  Vec3 xi11 = Vec3::Zero();
  Vec3 xi02 = Vec3::Zero();
  Corner corner = Corner::U0V0;
  double scale = 1.0;  // length scale of the source net, for tolerance gates

  double magnitude() const;
};

/// Corner jet computed two ways (derivative evaluation and the closed-form
/// control-point formulas); throws if the two paths disagree beyond
/// relative 1e-10 or if either degree is below 2.
CornerJet corner_jet(const TensorSurface& s, Corner c);

/// Exact corner derivatives from boundary control points; exposed for tests.
CornerJet corner_jet_from_control_points(const TensorSurface& s, Corner c);

/// Knot quantities tau_1, tau_2 (distances of the first two knots after the
/// clamped block from the corner) and the local control-point indices used
/// by the corner formulas.
struct CornerLayout {
  double tau_u1 = 0, tau_u2 = 0, tau_v1 = 0, tau_v2 = 0;
  // global net indices of the local points p00, p10, p01, p20, p11, p02
  int p00[2], p10[2], p01[2], p20[2], p11[2], p02[2];
};
CornerLayout corner_layout(const KnotVector& ku, const KnotVector& kv, Corner c);
CornerLayout corner_layout(const TensorSurface& s, Corner c);

struct QuadNode {
  double u, v, w;
};

/// Tensor Gauss-Legendre nodes with `points_per_span` points per knot span
/// and direction; weights sum to the domain area. Empty spans contribute
/// no nodes.
std::vector<QuadNode> quadrature_grid(const TensorSurface& s, int points_per_span);

/// 1D convenience used by the fitting code: per-span Gauss nodes on the
/// breakpoints of a knot vector.
void quadrature_1d(const KnotVector& kv, int points_per_span,
                   std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace rcsurf
