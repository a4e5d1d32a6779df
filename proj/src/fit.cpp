#include "rcsurf/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcsurf/corner.hpp"

namespace rcsurf {

namespace {

// sin(pi sqrt(s) / 2) / sqrt(s) and derivatives in s; series near s = 0.
struct RadialLift {
  double g, gp, gpp, h;  // g, g', g'' and h = cos(pi sqrt(s) / 2)

  explicit RadialLift(double s) {
    const double q = M_PI * M_PI / 4.0;
    h = std::cos(0.5 * M_PI * std::sqrt(std::max(s, 0.0)));
    if (s < 1e-3) {
      const double x = q * s;
      g = 0.5 * M_PI * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
      gp = 0.5 * M_PI * q * (-1.0 / 6.0 + 2.0 * x / 120.0 - 3.0 * x * x / 5040.0);
      gpp = 0.5 * M_PI * q * q * (2.0 / 120.0 - 6.0 * x / 5040.0 + 12.0 * x * x / 362880.0);
      return;
    }
    const double r = std::sqrt(s);
    g = std::sin(0.5 * M_PI * r) / r;
    gp = (0.25 * M_PI * h - 0.5 * g) / s;
    gpp = (-q / 4.0 * g - 1.5 * gp) / s;
  }
};

}  // namespace

Vec3 hemisphere_reference(double u, double v) {
  const double a = u * std::sqrt(1.0 - 0.5 * v * v);
  const double b = v * std::sqrt(1.0 - 0.5 * u * u);
  const double s = a * a + b * b;
  const RadialLift L(s);
  return Vec3(a * L.g, b * L.g, L.h);
}

JetSample hemisphere_jet(double u, double v) {
  const double wu = std::sqrt(1.0 - 0.5 * u * u);
  const double wv = std::sqrt(1.0 - 0.5 * v * v);
  const double a = u * wv, b = v * wu;
  const double au = wv, av = -u * v / (2.0 * wv);
  const double bu = -u * v / (2.0 * wu), bv = wu;
  const double auu = 0.0, auv = -v / (2.0 * wv);
  const double avv = -u * (1.0 / (2.0 * wv) + v * v / (4.0 * wv * wv * wv));
  const double bvv = 0.0, buv = -u / (2.0 * wu);
  const double buu = -v * (1.0 / (2.0 * wu) + u * u / (4.0 * wu * wu * wu));

  const double s = u * u + v * v - u * u * v * v;
  const double su = 2.0 * u * (1.0 - v * v), sv = 2.0 * v * (1.0 - u * u);
  const double suu = 2.0 * (1.0 - v * v), svv = 2.0 * (1.0 - u * u), suv = -4.0 * u * v;

  const RadialLift L(s);
  const double hp = -0.25 * M_PI * L.g;    // h'(s)
  const double hpp = -0.25 * M_PI * L.gp;  // h''(s)

  JetSample j;
  j.x = Vec3(a * L.g, b * L.g, L.h);
  j.xu = Vec3(au * L.g + a * L.gp * su, bu * L.g + b * L.gp * su, hp * su);
  j.xv = Vec3(av * L.g + a * L.gp * sv, bv * L.g + b * L.gp * sv, hp * sv);
  j.xuu = Vec3(auu * L.g + 2.0 * au * L.gp * su + a * (L.gpp * su * su + L.gp * suu),
               buu * L.g + 2.0 * bu * L.gp * su + b * (L.gpp * su * su + L.gp * suu),
               hpp * su * su + hp * suu);
  j.xvv = Vec3(avv * L.g + 2.0 * av * L.gp * sv + a * (L.gpp * sv * sv + L.gp * svv),
               bvv * L.g + 2.0 * bv * L.gp * sv + b * (L.gpp * sv * sv + L.gp * svv),
               hpp * sv * sv + hp * svv);
  j.xuv = Vec3(auv * L.g + au * L.gp * sv + av * L.gp * su + a * (L.gpp * su * sv + L.gp * suv),
               buv * L.g + bu * L.gp * sv + bv * L.gp * su + b * (L.gpp * su * sv + L.gp * suv),
               hpp * su * sv + hp * suv);
  return j;
}

Vec3 hemisphere_corner_normal(Corner c) {
  const double x = corner_u_reversed(c) ? 1.0 : -1.0;
  const double y = corner_v_reversed(c) ? 1.0 : -1.0;
  return Vec3(x, y, 0.0) / std::sqrt(2.0);
}

namespace {

int effective_quad_points(const FitProblem& p) {
  const int deg = std::max(p.ku.degree(), p.kv.degree());
  if (p.quad_points == 0) return deg + 2;
  if (p.quad_points < deg + 1)
    throw std::invalid_argument("fit: quadrature order below degree+1 per span");
  return p.quad_points;
}

Eigen::MatrixXd gram_1d(const KnotVector& kv, int quad_points) {
  const int n = kv.num_basis();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> qn, qw;
  quadrature_1d(kv, quad_points, qn, qw);
  for (std::size_t q = 0; q < qn.size(); ++q) {
    const BasisValues b = basis_eval(kv, qn[q], 0);
    for (int i = 0; i <= kv.degree(); ++i)
      for (int j = 0; j <= kv.degree(); ++j)
        G(b.first + i, b.first + j) += qw[q] * b.d(0, i) * b.d(0, j);
  }
  return G;
}

}  // namespace

L2System assemble_l2(const FitProblem& p) {
  if (!p.target) throw std::invalid_argument("assemble_l2: no target map");
  const int q = effective_quad_points(p);
  const int N1 = p.ku.num_basis(), N2 = p.kv.num_basis();
  const Eigen::MatrixXd Gu = gram_1d(p.ku, q);
  const Eigen::MatrixXd Gv = gram_1d(p.kv, q);

  L2System sys;
  sys.gram.resize(N1 * N2, N1 * N2);
  for (int j = 0; j < N1; ++j)
    for (int jp = 0; jp < N1; ++jp)
      sys.gram.block(j * N2, jp * N2, N2, N2) = Gu(j, jp) * Gv;

  sys.moments = Eigen::MatrixXd::Zero(N1 * N2, 3);
  std::vector<double> un, uw, vn, vw;
  quadrature_1d(p.ku, q, un, uw);
  quadrature_1d(p.kv, q, vn, vw);
  std::vector<BasisValues> vbasis(vn.size());
  for (std::size_t l = 0; l < vn.size(); ++l) vbasis[l] = basis_eval(p.kv, vn[l], 0);
  for (std::size_t k = 0; k < un.size(); ++k) {
    const BasisValues bu = basis_eval(p.ku, un[k], 0);
    for (std::size_t l = 0; l < vn.size(); ++l) {
      const BasisValues& bv = vbasis[l];
      const double w = uw[k] * vw[l];
      const Vec3 y = p.target(un[k], vn[l]);
      sys.target_sq += w * y.squaredNorm();
      for (int i = 0; i <= p.ku.degree(); ++i) {
        const double cu = w * bu.d(0, i);
        for (int j = 0; j <= p.kv.degree(); ++j)
          sys.moments.row((bu.first + i) * N2 + bv.first + j) +=
              cu * bv.d(0, j) * y.transpose();
      }
    }
  }
  return sys;
}

ConstraintRows corner_constraint_rows(const CornerConstraintSpec& spec,
                                      const KnotVector& ku, const KnotVector& kv) {
  if (ku.num_basis() < 3 || kv.num_basis() < 3)
    throw std::invalid_argument("corner constraints need at least 3x3 control points");
  if (!(spec.alpha1 > 0.0 && spec.alpha1 < 1.0) ||
      std::abs(spec.alpha1 + spec.alpha2 - 1.0) > 1e-12)
    throw std::invalid_argument("corner constraints: weights must lie in (0,1) and sum to 1");
  if (spec.normal.norm() < 1e-300)
    throw std::invalid_argument("corner constraints: zero prescribed normal");
  const Vec3 n = spec.normal.normalized();
  const CornerLayout L = corner_layout(ku, kv, spec.id);
  const int N = ku.num_basis() * kv.num_basis();
  const int N2 = kv.num_basis();
  auto flat = [&](const int* idx) { return idx[0] * N2 + idx[1]; };
  const int i00 = flat(L.p00), i10 = flat(L.p10), i01 = flat(L.p01);
  const int i20 = flat(L.p20), i11 = flat(L.p11), i02 = flat(L.p02);
  const double a1 = spec.alpha1, a2 = spec.alpha2;
  const int n1 = ku.degree(), n2 = kv.degree();

  ConstraintRows rows;
  rows.C = Eigen::MatrixXd::Zero(6, 3 * N);
  rows.d = Eigen::VectorXd::Zero(6);
  // p00 = a1 p10 + a2 p01, one row per coordinate
  for (int c = 0; c < 3; ++c) {
    rows.C(c, c * N + i00) = 1.0;
    rows.C(c, c * N + i10) = -a1;
    rows.C(c, c * N + i01) = -a2;
  }
  // <t*, n> = <p10 - p01, n> = 0
  for (int c = 0; c < 3; ++c) {
    rows.C(3, c * N + i10) += n(c);
    rows.C(3, c * N + i01) -= n(c);
  }
  // <r*, n> = 0 with r* = (n1-1) tau_u1 a1 (p20 - p00) + n1 tau_u2 a2 (p11 - p00)
  const double ru20 = (n1 - 1) * L.tau_u1 * a1;
  const double ru11 = n1 * L.tau_u2 * a2;
  for (int c = 0; c < 3; ++c) {
    rows.C(4, c * N + i20) += ru20 * n(c);
    rows.C(4, c * N + i11) += ru11 * n(c);
    rows.C(4, c * N + i00) -= (ru20 + ru11) * n(c);
  }
  // <s*, n> = 0 with s* = (n2-1) tau_v1 a2 (p02 - p00) + n2 tau_v2 a1 (p11 - p00)
  const double sv02 = (n2 - 1) * L.tau_v1 * a2;
  const double sv11 = n2 * L.tau_v2 * a1;
  for (int c = 0; c < 3; ++c) {
    rows.C(5, c * N + i02) += sv02 * n(c);
    rows.C(5, c * N + i11) += sv11 * n(c);
    rows.C(5, c * N + i00) -= (sv02 + sv11) * n(c);
  }
  return rows;
}

KktSolution solve_kkt(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& moments,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& d) {
  const int N = static_cast<int>(gram.rows());
  const int k = static_cast<int>(moments.cols());
  if (gram.cols() != N || moments.rows() != N)
    throw std::invalid_argument("solve_kkt: inconsistent objective dimensions");

  KktSolution sol;
  if (C.rows() == 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve_kkt: Gram matrix is not positive definite "
                               "(insufficient quadrature?)");
    sol.x = llt.solve(moments);
    sol.kkt_residual = (gram * sol.x - moments).cwiseAbs().maxCoeff() /
                       std::max(moments.cwiseAbs().maxCoeff(), 1e-300);
    return sol;
  }
  if (C.cols() != static_cast<Eigen::Index>(k) * N || d.size() != C.rows())
    throw std::invalid_argument("solve_kkt: inconsistent constraint dimensions");

  // rank filter: column-pivoted QR of C^T selects independent rows
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep;
  const auto perm = qr.colsPermutation().indices();
  for (int i = 0; i < rank; ++i) keep.push_back(perm(i));
  std::sort(keep.begin(), keep.end());
  for (int i = 0; i < C.rows(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) sol.dropped_rows.push_back(i);

  Eigen::MatrixXd Ck(rank, C.cols());
  Eigen::VectorXd dk(rank);
  for (int i = 0; i < rank; ++i) {
    Ck.row(i) = C.row(keep[i]);
    dk(i) = d(keep[i]);
  }

  const int size = k * N + rank;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(size, size);
  for (int c = 0; c < k; ++c) K.block(c * N, c * N, N, N) = gram;
  K.block(0, k * N, k * N, rank) = Ck.transpose();
  K.block(k * N, 0, rank, k * N) = Ck;
  Eigen::VectorXd rhs(size);
  for (int c = 0; c < k; ++c) rhs.segment(c * N, N) = moments.col(c);
  rhs.segment(k * N, rank) = dk;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  Eigen::VectorXd z = lu.solve(rhs);
  z += lu.solve(rhs - K * z);  // one step of iterative refinement

  const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1.0);
  sol.kkt_residual = (K * z - rhs).cwiseAbs().maxCoeff() / scale;
  if (!z.allFinite())
    throw std::runtime_error("solve_kkt: singular KKT system");

  sol.x.resize(N, k);
  for (int c = 0; c < k; ++c) sol.x.col(c) = z.segment(c * N, N);
  sol.multipliers = z.segment(k * N, rank);
  return sol;
}

namespace {

struct EdgeSpec {
  PatchEdge edge;
  bool along_u;  // edge curve parametrized by u (v fixed) or by v (u fixed)
};

// flat net index of the i-th control point of an edge row
int edge_index(PatchEdge e, int i, int N1, int N2) {
  switch (e) {
    case PatchEdge::U0: return i;                       // (0, i)
    case PatchEdge::U1: return (N1 - 1) * N2 + i;       // (N1-1, i)
    case PatchEdge::V0: return i * N2;                  // (i, 0)
    case PatchEdge::V1: return i * N2 + (N2 - 1);       // (i, N2-1)
  }
  throw std::logic_error("edge_index: invalid edge");
}

}  // namespace

Eigen::MatrixXd fit_curve_1d(const KnotVector& kv,
                             const std::function<Vec3(double)>& target,
                             int quad_points) {
  const int q = quad_points > 0 ? quad_points : kv.degree() + 2;
  if (q < kv.degree() + 1)
    throw std::invalid_argument("fit_curve_1d: quadrature order below degree+1");
  const int n = kv.num_basis();
  Eigen::MatrixXd G = gram_1d(kv, q);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, 3);
  std::vector<double> qn, qw;
  quadrature_1d(kv, q, qn, qw);
  for (std::size_t i = 0; i < qn.size(); ++i) {
    const BasisValues b = basis_eval(kv, qn[i], 0);
    const Vec3 y = target(qn[i]);
    for (int j = 0; j <= kv.degree(); ++j)
      m.row(b.first + j) += qw[i] * b.d(0, j) * y.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("fit_curve_1d: singular Gram matrix");
  return llt.solve(m);
}

FitReport fit_surface(const FitProblem& p) {
  if (!p.target) throw std::invalid_argument("fit_surface: no target map");
  const int N1 = p.ku.num_basis(), N2 = p.kv.num_basis();
  const int N = N1 * N2;
  const int q = effective_quad_points(p);

  // all constraint rows over the stacked unknowns
  Eigen::MatrixXd C(0, 3 * N);
  Eigen::VectorXd d(0);
  for (const CornerConstraintSpec& spec : p.constraints) {
    const ConstraintRows r = corner_constraint_rows(spec, p.ku, p.kv);
    const int m0 = static_cast<int>(C.rows());
    C.conservativeResize(m0 + r.C.rows(), Eigen::NoChange);
    d.conservativeResize(m0 + r.d.size());
    C.bottomRows(r.C.rows()) = r.C;
    d.tail(r.d.size()) = r.d;
  }

  const L2System sys = assemble_l2(p);
  Eigen::MatrixXd z(N, 3);

  if (!p.two_step) {
    const KktSolution sol = solve_kkt(sys.gram, sys.moments, C, d);
    z = sol.x;
  } else {
    // --- step 1: boundary control points against the boundary curves ---
    std::vector<int> to_boundary(N, -1);
    std::vector<int> boundary;
    for (int j = 0; j < N1; ++j)
      for (int k = 0; k < N2; ++k)
        if (j == 0 || j == N1 - 1 || k == 0 || k == N2 - 1) {
          to_boundary[j * N2 + k] = static_cast<int>(boundary.size());
          boundary.push_back(j * N2 + k);
        }
    const int nb = static_cast<int>(boundary.size());

    Eigen::MatrixXd Gb = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd mb = Eigen::MatrixXd::Zero(nb, 3);
    const double ua = p.ku.start(), ub = p.ku.end();
    const double va = p.kv.start(), vb = p.kv.end();
    const struct {
      PatchEdge e;
      const KnotVector* kv;
    } edges[4] = {{PatchEdge::U0, &p.kv},
                  {PatchEdge::U1, &p.kv},
                  {PatchEdge::V0, &p.ku},
                  {PatchEdge::V1, &p.ku}};
    for (const auto& E : edges) {
      std::vector<double> qn, qw;
      quadrature_1d(*E.kv, q, qn, qw);
      auto curve_point = [&](double t) {
        switch (E.e) {
          case PatchEdge::U0: return p.target(ua, t);
          case PatchEdge::U1: return p.target(ub, t);
          case PatchEdge::V0: return p.target(t, va);
          default: return p.target(t, vb);
        }
      };
      for (std::size_t i = 0; i < qn.size(); ++i) {
        const BasisValues b = basis_eval(*E.kv, qn[i], 0);
        const Vec3 y = curve_point(qn[i]);
        for (int r = 0; r <= E.kv->degree(); ++r) {
          const int gr = to_boundary[edge_index(E.e, b.first + r, N1, N2)];
          mb.row(gr) += qw[i] * b.d(0, r) * y.transpose();
          for (int c = 0; c <= E.kv->degree(); ++c) {
            const int gc = to_boundary[edge_index(E.e, b.first + c, N1, N2)];
            Gb(gr, gc) += qw[i] * b.d(0, r) * b.d(0, c);
          }
        }
      }
    }

    // rows fully supported on boundary unknowns act in this step
    std::vector<int> brow, irow;
    for (int r = 0; r < C.rows(); ++r) {
      bool on_boundary = true;
      for (int col = 0; col < C.cols(); ++col)
        if (C(r, col) != 0.0 && to_boundary[col % N] < 0) {
          on_boundary = false;
          break;
        }
      (on_boundary ? brow : irow).push_back(r);
    }
    Eigen::MatrixXd Cb(brow.size(), 3 * nb);
    Eigen::VectorXd db(brow.size());
    for (std::size_t r = 0; r < brow.size(); ++r) {
      db(r) = d(brow[r]);
      for (int c = 0; c < 3; ++c)
        for (int i = 0; i < nb; ++i)
          Cb(r, c * nb + i) = C(brow[r], c * N + boundary[i]);
    }
    const KktSolution bsol = solve_kkt(Gb, mb, Cb, db);

    // --- step 2: interior control points, boundary fixed ---
    std::vector<int> interior;
    std::vector<int> to_interior(N, -1);
    for (int i = 0; i < N; ++i)
      if (to_boundary[i] < 0) {
        to_interior[i] = static_cast<int>(interior.size());
        interior.push_back(i);
      }
    const int ni = static_cast<int>(interior.size());

    z.setZero();
    for (int i = 0; i < nb; ++i) z.row(boundary[i]) = bsol.x.row(i);

    if (ni > 0) {
      Eigen::MatrixXd Gii(ni, ni), Gib(ni, nb);
      for (int r = 0; r < ni; ++r) {
        for (int c = 0; c < ni; ++c) Gii(r, c) = sys.gram(interior[r], interior[c]);
        for (int c = 0; c < nb; ++c) Gib(r, c) = sys.gram(interior[r], boundary[c]);
      }
      Eigen::MatrixXd mi(ni, 3);
      for (int r = 0; r < ni; ++r) mi.row(r) = sys.moments.row(interior[r]);
      mi -= Gib * bsol.x;

      Eigen::MatrixXd Ci = Eigen::MatrixXd::Zero(irow.size(), 3 * ni);
      Eigen::VectorXd di(irow.size());
      for (std::size_t r = 0; r < irow.size(); ++r) {
        double adj = d(irow[r]);
        for (int c = 0; c < 3; ++c)
          for (int i = 0; i < N; ++i) {
            const double coef = C(irow[r], c * N + i);
            if (coef == 0.0) continue;
            if (to_interior[i] >= 0)
              Ci(r, c * ni + to_interior[i]) = coef;
            else
              adj -= coef * z(i, c);
          }
        di(r) = adj;
      }

      const KktSolution isol = solve_kkt(Gii, mi, Ci, di);
      for (int i = 0; i < ni; ++i) z.row(interior[i]) = isol.x.row(i);
    }
  }

  std::vector<Vec3> net(N);
  for (int i = 0; i < N; ++i) net[i] = z.row(i).transpose();
  FitReport rep{TensorSurface(p.ku, p.kv, std::move(net))};

  // integrated squared error from the assembled pieces
  double sq = sys.target_sq;
  for (int c = 0; c < 3; ++c) {
    const Eigen::VectorXd zc = z.col(c);
    sq += zc.dot(sys.gram * zc) - 2.0 * zc.dot(sys.moments.col(c));
  }
  rep.l2_residual = std::sqrt(std::max(sq, 0.0));

  if (C.rows() > 0) {
    Eigen::VectorXd zf(3 * N);
    for (int c = 0; c < 3; ++c) zf.segment(c * N, N) = z.col(c);
    rep.constraint_residual = (C * zf - d).cwiseAbs().maxCoeff();
  }

  const int grid = 200;
  const double ua = p.ku.start(), ub = p.ku.end();
  const double va = p.kv.start(), vb = p.kv.end();
  for (int i = 0; i <= grid; ++i) {
    const double u = ua + (ub - ua) * i / grid;
    for (int j = 0; j <= grid; ++j) {
      const double v = va + (vb - va) * j / grid;
      rep.max_error =
          std::max(rep.max_error, (rep.surface.eval(u, v) - p.target(u, v)).norm());
    }
  }

  for (const CornerConstraintSpec& spec : p.constraints) {
    const SplineCornerReport scr = spline_corner_conditions(rep.surface, spec.id);
    rep.corner_flags.push_back(
        {spec.id, scr.antiparallel_ok, scr.coplanar_ok, scr.onesided_ok});
  }
  return rep;
}

FitProblem hemisphere_problem(int degree, int level, bool rcc, bool two_step,
                              int quad_points) {
  if (degree < 2) throw std::invalid_argument("hemisphere: degree must be >= 2");
  if (level < 1) throw std::invalid_argument("hemisphere: level must be >= 1");
  const int spans = 1 << (level + 1);  // spacing 2^-level on [-1, 1]
  FitProblem p{uniform_clamped_knots(degree, spans, -1.0, 1.0),
               uniform_clamped_knots(degree, spans, -1.0, 1.0),
               [](double u, double v) { return hemisphere_reference(u, v); },
               {},
               quad_points,
               two_step};
  if (rcc) {
    for (Corner c : {Corner::U0V0, Corner::U1V0, Corner::U0V1, Corner::U1V1})
      p.constraints.push_back({c, 0.5, 0.5, hemisphere_corner_normal(c)});
  }
  return p;
}

double hemisphere_max_normal_angle(const TensorSurface& s, int grid) {
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double u = -1.0 + 2.0 * i / grid;
    for (int j = 0; j <= grid; ++j) {
      if ((i == 0 || i == grid) && (j == 0 || j == grid)) continue;
      const double v = -1.0 + 2.0 * j / grid;
      const Vec3 nu = normal_vector(s, u, v);
      const Vec3 ref = hemisphere_reference(u, v);
      worst = std::max(worst, std::atan2(nu.cross(ref).norm(), nu.dot(ref)));
    }
  }
  return worst;
}

}  // namespace rcsurf
