#include "rcsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcsurf {

TensorSurface::TensorSurface(KnotVector ku, KnotVector kv, std::vector<Vec3> net)
    : ku_(std::move(ku)), kv_(std::move(kv)), net_(std::move(net)) {
  const std::size_t expected =
      static_cast<std::size_t>(ku_.num_basis()) * kv_.num_basis();
  if (net_.size() != expected)
    throw std::invalid_argument(
        "surface: control net size does not match the knot vectors");
  for (const Vec3& p : net_)
    if (!p.allFinite())
      throw std::invalid_argument("surface: control net contains non-finite values");
}

Vec3 TensorSurface::eval(double u, double v, int ju, int jv) const {
  if (ju < 0 || jv < 0) throw std::invalid_argument("eval: negative derivative order");
  if (ju > ku_.degree() || jv > kv_.degree())
    throw std::invalid_argument("eval: derivative order exceeds the degree");
  const BasisValues bu = basis_eval(ku_, u, ju);
  const BasisValues bv = basis_eval(kv_, v, jv);
  Vec3 out = Vec3::Zero();
  for (int j = 0; j <= ku_.degree(); ++j) {
    const double wu = bu.d(ju, j);
    if (wu == 0.0) continue;
    for (int k = 0; k <= kv_.degree(); ++k)
      out += wu * bv.d(jv, k) * cp(bu.first + j, bv.first + k);
  }
  return out;
}

double TensorSurface::net_diameter() const {
  Vec3 lo = net_.front(), hi = net_.front();
  for (const Vec3& p : net_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

TensorSurface TensorSurface::reversed_u() const {
  std::vector<Vec3> net(net_.size());
  const int N1 = n1(), N2 = n2();
  for (int j = 0; j < N1; ++j)
    for (int k = 0; k < N2; ++k)
      net[static_cast<std::size_t>(N1 - 1 - j) * N2 + k] = cp(j, k);
  return TensorSurface(ku_.reversed(), kv_, std::move(net));
}

TensorSurface TensorSurface::reversed_v() const {
  std::vector<Vec3> net(net_.size());
  const int N1 = n1(), N2 = n2();
  for (int j = 0; j < N1; ++j)
    for (int k = 0; k < N2; ++k)
      net[static_cast<std::size_t>(j) * N2 + (N2 - 1 - k)] = cp(j, k);
  return TensorSurface(ku_, kv_.reversed(), std::move(net));
}

TensorSurface TensorSurface::transposed() const {
  std::vector<Vec3> net(net_.size());
  const int N1 = n1(), N2 = n2();
  for (int j = 0; j < N1; ++j)
    for (int k = 0; k < N2; ++k)
      net[static_cast<std::size_t>(k) * N1 + j] = cp(j, k);
  return TensorSurface(kv_, ku_, std::move(net));
}

TensorSurface TensorSurface::corner_local(Corner c) const {
  TensorSurface s = *this;
  if (corner_u_reversed(c)) s = s.reversed_u();
  if (corner_v_reversed(c)) s = s.reversed_v();
  return s;
}

double CornerJet::magnitude() const {
  double m = 0.0;
  for (const Vec3* v : {&xi10, &xi01, &xi20, &xi11, &xi02})
    m = std::max(m, v->norm());
  return m;
}

CornerLayout corner_layout(const KnotVector& ku, const KnotVector& kv, Corner c) {
  CornerLayout L;
  const int N1 = ku.num_basis(), N2 = kv.num_basis();
  const int pu = ku.degree(), pv = kv.degree();
  const auto& tu = ku.knots();
  const auto& tv = kv.knots();
  const bool ru = corner_u_reversed(c), rv = corner_v_reversed(c);

  if (!ru) {
    L.tau_u1 = tu[pu + 1] - tu[pu];
    L.tau_u2 = tu[pu + 2] - tu[pu];
  } else {
    const int m = static_cast<int>(tu.size());
    L.tau_u1 = tu[m - pu - 1] - tu[m - pu - 2];
    L.tau_u2 = tu[m - pu - 1] - tu[m - pu - 3];
  }
  if (!rv) {
    L.tau_v1 = tv[pv + 1] - tv[pv];
    L.tau_v2 = tv[pv + 2] - tv[pv];
  } else {
    const int m = static_cast<int>(tv.size());
    L.tau_v1 = tv[m - pv - 1] - tv[m - pv - 2];
    L.tau_v2 = tv[m - pv - 1] - tv[m - pv - 3];
  }

  auto gj = [&](int j) { return ru ? N1 - 1 - j : j; };
  auto gk = [&](int k) { return rv ? N2 - 1 - k : k; };
  auto set = [&](int* idx, int j, int k) {
    idx[0] = gj(j);
    idx[1] = gk(k);
  };
  set(L.p00, 0, 0);
  set(L.p10, 1, 0);
  set(L.p01, 0, 1);
  set(L.p20, 2, 0);
  set(L.p11, 1, 1);
  set(L.p02, 0, 2);
  return L;
}

CornerLayout corner_layout(const TensorSurface& s, Corner c) {
  return corner_layout(s.ku(), s.kv(), c);
}

CornerJet corner_jet_from_control_points(const TensorSurface& s, Corner c) {
  const int n1 = s.ku().degree(), n2 = s.kv().degree();
  if (n1 < 2 || n2 < 2)
    throw std::invalid_argument("corner_jet: both degrees must be >= 2");
  const CornerLayout L = corner_layout(s, c);
  auto P = [&](const int* idx) -> const Vec3& { return s.cp(idx[0], idx[1]); };
  const Vec3 p00 = P(L.p00), p10 = P(L.p10), p01 = P(L.p01);
  const Vec3 p20 = P(L.p20), p11 = P(L.p11), p02 = P(L.p02);

  CornerJet jet;
  jet.corner = c;
  jet.scale = s.net_diameter();
  jet.xi00 = p00;
  jet.xi10 = n1 / L.tau_u1 * (p10 - p00);
  jet.xi01 = n2 / L.tau_v1 * (p01 - p00);
  jet.xi20 = n1 * (n1 - 1) / L.tau_u1 * ((p20 - p10) / L.tau_u2 - (p10 - p00) / L.tau_u1);
  jet.xi02 = n2 * (n2 - 1) / L.tau_v1 * ((p02 - p01) / L.tau_v2 - (p01 - p00) / L.tau_v1);
  jet.xi11 = n1 * n2 / (L.tau_u1 * L.tau_v1) * (p11 - p10 - p01 + p00);
  return jet;
}

CornerJet corner_jet(const TensorSurface& s, Corner c) {
  CornerJet jet = corner_jet_from_control_points(s, c);

  // Independent path: generic derivative evaluation on the reparametrized
  // surface whose corner sits at the parameter origin.
  const TensorSurface local = s.corner_local(c);
  const double u0 = local.ku().start(), v0 = local.kv().start();
  CornerJet eval_jet;
  eval_jet.xi00 = local.eval(u0, v0, 0, 0);
  eval_jet.xi10 = local.eval(u0, v0, 1, 0);
  eval_jet.xi01 = local.eval(u0, v0, 0, 1);
  eval_jet.xi20 = local.eval(u0, v0, 2, 0);
  eval_jet.xi11 = local.eval(u0, v0, 1, 1);
  eval_jet.xi02 = local.eval(u0, v0, 0, 2);

  const double scale = std::max(jet.magnitude(), eval_jet.magnitude());
  const double tol = 1e-10 * std::max(scale, 1e-300);
  const Vec3* a[6] = {&jet.xi00, &jet.xi10, &jet.xi01, &jet.xi20, &jet.xi11, &jet.xi02};
  const Vec3* b[6] = {&eval_jet.xi00, &eval_jet.xi10, &eval_jet.xi01,
                      &eval_jet.xi20, &eval_jet.xi11, &eval_jet.xi02};
  for (int i = 1; i < 6; ++i)
    if ((*a[i] - *b[i]).norm() > tol)
      throw std::runtime_error(
          "corner_jet: control-point formulas and derivative evaluation disagree");
  if ((*a[0] - *b[0]).norm() > 1e-10 * std::max(jet.xi00.norm() + jet.scale, 1e-300))
    throw std::runtime_error("corner_jet: corner point mismatch between paths");
  return jet;
}

std::vector<QuadNode> quadrature_grid(const TensorSurface& s, int points_per_span) {
  if (points_per_span < 1)
    throw std::invalid_argument("quadrature_grid: need at least one point per span");
  std::vector<double> un, uw, vn, vw;
  quadrature_1d(s.ku(), points_per_span, un, uw);
  quadrature_1d(s.kv(), points_per_span, vn, vw);
  std::vector<QuadNode> out;
  out.reserve(un.size() * vn.size());
  for (std::size_t i = 0; i < un.size(); ++i)
    for (std::size_t j = 0; j < vn.size(); ++j)
      out.push_back({un[i], vn[j], uw[i] * vw[j]});
  return out;
}

void quadrature_1d(const KnotVector& kv, int points_per_span,
                   std::vector<double>& nodes, std::vector<double>& weights) {
  if (points_per_span < 1)
    throw std::invalid_argument("quadrature_1d: need at least one point per span");
  std::vector<double> gx, gw;
  gauss_legendre(points_per_span, gx, gw);
  nodes.clear();
  weights.clear();
  const std::vector<double> bk = kv.breakpoints();
  for (std::size_t i = 0; i + 1 < bk.size(); ++i) {
    const double a = bk[i], b = bk[i + 1];
    for (int q = 0; q < points_per_span; ++q) {
      nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * gx[q]);
      weights.push_back(0.5 * (b - a) * gw[q]);
    }
  }
}

}  // namespace rcsurf
