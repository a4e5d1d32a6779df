#include "rcsurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace rcsurf {

Vec3 normal_vector(const TensorSurface& s, double u, double v) {
  const Vec3 xu = s.eval(u, v, 1, 0);
  const Vec3 xv = s.eval(u, v, 0, 1);
  const Vec3 w = xu.cross(xv);
  const double scale = xu.norm() * xv.norm();
  if (w.norm() <= 1e-14 * scale)
    throw DegeneratePointError("normal undefined: first partials are parallel at (" +
                               std::to_string(u) + ", " + std::to_string(v) + ")");
  return w.normalized();
}

JetSample jet_sample(const TensorSurface& s, double u, double v) {
  JetSample j;
  j.x = s.eval(u, v, 0, 0);
  j.xu = s.eval(u, v, 1, 0);
  j.xv = s.eval(u, v, 0, 1);
  j.xuu = s.eval(u, v, 2, 0);
  j.xuv = s.eval(u, v, 1, 1);
  j.xvv = s.eval(u, v, 0, 2);
  return j;
}

FundamentalForms fundamental_forms(const JetSample& j) {
  FundamentalForms f;
  f.G << j.xu.dot(j.xu), j.xu.dot(j.xv), j.xu.dot(j.xv), j.xv.dot(j.xv);
  const Vec3 w = j.xu.cross(j.xv);
  const double wn = w.norm();
  if (wn <= 1e-14 * j.xu.norm() * j.xv.norm())
    throw DegeneratePointError("fundamental forms: first fundamental form is singular");
  const Vec3 nu = w / wn;
  f.B << j.xuu.dot(nu), j.xuv.dot(nu), j.xuv.dot(nu), j.xvv.dot(nu);
  // det G = ||xu x xv||^2, so the inverse is well defined here
  Mat2 Ginv;
  Ginv << f.G(1, 1), -f.G(0, 1), -f.G(0, 1), f.G(0, 0);
  Ginv /= wn * wn;
  f.S = Ginv * f.B;
  const double tr = f.S.trace(), det = f.S.determinant();
  const double disc = std::max(tr * tr - 4.0 * det, 0.0);
  const double root = std::sqrt(disc);
  f.kappa1 = 0.5 * (tr + root);
  f.kappa2 = 0.5 * (tr - root);
  if (std::abs(f.kappa1) < std::abs(f.kappa2)) std::swap(f.kappa1, f.kappa2);
  return f;
}

FundamentalForms fundamental_forms(const TensorSurface& s, double u, double v) {
  return fundamental_forms(jet_sample(s, u, v));
}

double fit_log_slope(const std::vector<double>& parameters,
                     const std::vector<double>& values, int drop_largest) {
  if (parameters.size() != values.size())
    throw std::invalid_argument("fit_log_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = static_cast<std::size_t>(drop_largest); i < parameters.size(); ++i) {
    if (values[i] <= 0.0 || parameters[i] <= 0.0) continue;
    lx.push_back(std::log(parameters[i]));
    ly.push_back(std::log(values[i]));
  }
  if (lx.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double n = static_cast<double>(lx.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_spaced_scales(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("log_spaced_scales: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double la = std::log(hi), lb = std::log(lo);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(la + (lb - la) * i / (count - 1));
  return out;
}

namespace {

void check_scales(const std::vector<double>& alphas) {
  if (alphas.empty()) throw std::invalid_argument("probe: empty scale list");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] <= 0.0) throw std::invalid_argument("probe: scales must be positive");
    if (i > 0 && alphas[i] >= alphas[i - 1])
      throw std::invalid_argument("probe: scales must be strictly decreasing");
  }
}

CornerFrame rounded_frame_or_throw(const TensorSurface& s, Corner c) {
  const CornerClassification cls = classify_corner(corner_jet(s, c));
  if (cls.kind != CornerKind::Rounded || !cls.frame)
    throw std::invalid_argument("probe: corner does not classify Rounded (" +
                                corner_kind_name(cls.kind) + ")");
  return *cls.frame;
}

double angle_between_unit(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

ProbeSeries normal_convergence_probe(const TensorSurface& s, Corner c,
                                     const Vec2& direction,
                                     const std::vector<double>& alphas,
                                     const Vec3& reference_normal) {
  check_scales(alphas);
  if (!(direction(0) > 0.0) || !(direction(1) > 0.0))
    throw std::invalid_argument("probe: direction must lie in the open positive quadrant");
  const TensorSurface local = s.corner_local(c);
  const double u0 = local.ku().start(), v0 = local.kv().start();
  const Vec3 n = reference_normal.normalized();

  ProbeSeries ps;
  ps.parameters = alphas;
  for (double a : alphas) {
    const Vec3 nu = normal_vector(local, u0 + a * direction(0), v0 + a * direction(1));
    ps.values.push_back(angle_between_unit(nu, n));
  }
  ps.fitted_rate = fit_log_slope(ps.parameters, ps.values);
  return ps;
}

ProbeSeries normal_convergence_probe(const TensorSurface& s, Corner c,
                                     const Vec2& direction,
                                     const std::vector<double>& alphas) {
  return normal_convergence_probe(s, c, direction, alphas,
                                  rounded_frame_or_throw(s, c).n);
}

ProbeSeries cross_norm_asymptotics(const TensorSurface& s, Corner c,
                                   const std::vector<double>& alphas) {
  check_scales(alphas);
  const CornerFrame f = rounded_frame_or_throw(s, c);
  const TensorSurface local = s.corner_local(c);
  const double u0 = local.ku().start(), v0 = local.kv().start();

  ProbeSeries ps;
  ps.parameters = alphas;
  std::vector<double> deviation;
  for (double a : alphas) {
    const Vec3 xu = local.eval(u0 + a, v0 + a, 1, 0);
    const Vec3 xv = local.eval(u0 + a, v0 + a, 0, 1);
    const double ratio = xu.cross(xv).norm() / ((f.rho + f.sigma) * a);
    ps.values.push_back(ratio);
    deviation.push_back(std::abs(ratio - 1.0));
  }
  ps.fitted_rate = fit_log_slope(ps.parameters, deviation);
  return ps;
}

namespace {

// 1D integration breakpoints: geometric ladder from eps toward the far end,
// merged with the knot breakpoints falling inside the cut interval.
std::vector<double> graded_breakpoints(const KnotVector& kv, double eps) {
  const double a = kv.start(), b = kv.end();
  if (!(eps > 0.0) || a + eps >= b)
    throw std::invalid_argument("curvature_integral: invalid eps for the domain");
  std::set<double> pts;
  double t = a + eps;
  while (t < b) {
    pts.insert(t);
    t = a + (t - a) * 2.0;
  }
  pts.insert(b);
  for (double k : kv.breakpoints())
    if (k > a + eps && k < b) pts.insert(k);
  return {pts.begin(), pts.end()};
}

}  // namespace

double curvature_integral(const TensorSurface& s, Corner c, double p, double eps) {
  if (p < 1.0) throw std::invalid_argument("curvature_integral: p must be >= 1");
  const TensorSurface local = s.corner_local(c);
  const std::vector<double> bu = graded_breakpoints(local.ku(), eps);
  const std::vector<double> bv = graded_breakpoints(local.kv(), eps);
  std::vector<double> gx, gw;
  gauss_legendre(4, gx, gw);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bu.size(); ++i) {
    for (std::size_t j = 0; j + 1 < bv.size(); ++j) {
      const double ua = bu[i], ub = bu[i + 1], va = bv[j], vb = bv[j + 1];
      double cell = 0.0;
      for (int qi = 0; qi < 4; ++qi) {
        const double u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * gx[qi];
        for (int qj = 0; qj < 4; ++qj) {
          const double v = 0.5 * (va + vb) + 0.5 * (vb - va) * gx[qj];
          const JetSample js = jet_sample(local, u, v);
          const double area = js.xu.cross(js.xv).norm();
          const FundamentalForms f = fundamental_forms(js);
          cell += gw[qi] * gw[qj] *
                  (std::pow(std::abs(f.kappa1), p) + std::pow(std::abs(f.kappa2), p)) *
                  area;
        }
      }
      total += cell * 0.25 * (ub - ua) * (vb - va);
    }
  }
  return total;
}

namespace {

struct ProjectionGrid {
  std::vector<Vec2> eta;  // parameter points
  std::vector<Vec2> pi;   // projected points
};

Vec2 project_point(const TensorSurface& s, const CornerFrame& f, const Vec3& origin,
                   double u, double v) {
  const Vec3 w = s.eval(u, v) - origin;
  return Vec2(f.t.dot(w), f.c.dot(w));
}

}  // namespace

InjectivityReport injectivity_probe(const TensorSurface& s, const CornerFrame& frame,
                                    const Vec3& origin, int grid_density) {
  if (grid_density < 4)
    throw std::invalid_argument("injectivity_probe: grid density too small");
  const double ua = s.ku().start(), ub = s.ku().end();
  const double va = s.kv().start(), vb = s.kv().end();
  const double du = (ub - ua) / grid_density, dv = (vb - va) / grid_density;
  const double step = std::max(du, dv);
  const double min_sep = 10.0 * step;

  ProjectionGrid g;
  g.eta.reserve((grid_density + 1) * (grid_density + 1));
  Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
  for (int i = 0; i <= grid_density; ++i) {
    for (int j = 0; j <= grid_density; ++j) {
      const double u = ua + i * du, v = va + j * dv;
      const Vec2 q = project_point(s, frame, origin, u, v);
      g.eta.emplace_back(u, v);
      g.pi.push_back(q);
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
  }

  // hash projected points on a grid matched to the sampling resolution
  const double cell = std::max((hi - lo).maxCoeff() / grid_density, 1e-300);
  std::map<std::pair<long, long>, std::vector<int>> buckets;
  for (std::size_t k = 0; k < g.pi.size(); ++k) {
    const long cx = static_cast<long>(std::floor((g.pi[k](0) - lo(0)) / cell));
    const long cy = static_cast<long>(std::floor((g.pi[k](1) - lo(1)) / cell));
    buckets[{cx, cy}].push_back(static_cast<int>(k));
  }

  struct Candidate {
    int a, b;
    double proj_dist, sep;
  };
  std::vector<Candidate> cands;
  for (const auto& [key, idx] : buckets) {
    for (int ox = -1; ox <= 1; ++ox) {
      for (int oy = -1; oy <= 1; ++oy) {
        const auto it = buckets.find({key.first + ox, key.second + oy});
        if (it == buckets.end()) continue;
        for (int a : idx) {
          for (int b : it->second) {
            if (b <= a) continue;
            const double sep = (g.eta[a] - g.eta[b]).norm();
            if (sep < min_sep) continue;
            const double pd = (g.pi[a] - g.pi[b]).norm();
            if (pd > 2.0 * cell) continue;
            cands.push_back({a, b, pd, sep});
          }
        }
      }
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& x, const Candidate& y) { return x.proj_dist < y.proj_dist; });
  if (cands.size() > 400) cands.resize(400);

  InjectivityReport rep;
  rep.grid_density = grid_density;
  rep.min_separation = min_sep;

  auto clamp_eta = [&](Vec2 e) {
    e(0) = std::clamp(e(0), ua, ub);
    e(1) = std::clamp(e(1), va, vb);
    return e;
  };
  auto dpi = [&](const Vec2& e) {
    Eigen::Matrix2d J;
    const Vec3 xu = s.eval(e(0), e(1), 1, 0), xv = s.eval(e(0), e(1), 0, 1);
    J << frame.t.dot(xu), frame.t.dot(xv), frame.c.dot(xu), frame.c.dot(xv);
    return J;
  };

  for (const Candidate& cand : cands) {
    Vec2 e0 = g.eta[cand.a], e1 = g.eta[cand.b];
    Vec2 F = project_point(s, frame, origin, e0(0), e0(1)) -
             project_point(s, frame, origin, e1(0), e1(1));
    // Gauss-Newton on the underdetermined system, least-norm steps
    for (int it = 0; it < 60 && F.norm() > 1e-13; ++it) {
      Eigen::Matrix<double, 2, 4> J;
      J.block<2, 2>(0, 0) = dpi(e0);
      J.block<2, 2>(0, 2) = -dpi(e1);
      const Eigen::Matrix2d JJt = J * J.transpose();
      if (std::abs(JJt.determinant()) < 1e-30) break;
      const Eigen::Vector4d delta = J.transpose() * JJt.ldlt().solve(-F);
      double damp = 1.0;
      const double f0 = F.norm();
      Vec2 n0 = e0, n1 = e1;
      for (int ls = 0; ls < 12; ++ls) {
        n0 = clamp_eta(e0 + damp * delta.head<2>());
        n1 = clamp_eta(e1 + damp * delta.tail<2>());
        const Vec2 Fn = project_point(s, frame, origin, n0(0), n0(1)) -
                        project_point(s, frame, origin, n1(0), n1(1));
        if (Fn.norm() < f0) {
          e0 = n0;
          e1 = n1;
          F = Fn;
          break;
        }
        damp *= 0.5;
      }
      if (damp < 1.0 / 4096.0) break;
    }
    const double sep = (e0 - e1).norm();
    if (F.norm() <= 1e-9 && sep >= min_sep) {
      rep.witness = InjectivityWitness{e0, e1, F.norm(), sep};
      return rep;
    }
  }
  return rep;
}

InjectivityReport injectivity_probe(const TensorSurface& s, Corner c,
                                    int grid_density) {
  const CornerFrame f = rounded_frame_or_throw(s, c);
  const TensorSurface local = s.corner_local(c);
  const Vec3 origin = local.eval(local.ku().start(), local.kv().start());
  return injectivity_probe(local, f, origin, grid_density);
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TensorSurface bezier_from_polynomial(const std::vector<std::vector<Vec3>>& coef) {
  const int n1 = static_cast<int>(coef.size()) - 1;
  if (n1 < 1) throw std::invalid_argument("bezier_from_polynomial: need u-degree >= 1");
  const int n2 = static_cast<int>(coef.front().size()) - 1;
  if (n2 < 1) throw std::invalid_argument("bezier_from_polynomial: need v-degree >= 1");
  for (const auto& row : coef)
    if (static_cast<int>(row.size()) != n2 + 1)
      throw std::invalid_argument("bezier_from_polynomial: ragged coefficient table");

  std::vector<Vec3> net(static_cast<std::size_t>(n1 + 1) * (n2 + 1), Vec3::Zero());
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      Vec3 b = Vec3::Zero();
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l)
          b += binomial(i, k) * binomial(j, l) / (binomial(n1, k) * binomial(n2, l)) *
               coef[k][l];
      net[static_cast<std::size_t>(i) * (n2 + 1) + j] = b;
    }
  }
  std::vector<double> tu, tv;
  for (int i = 0; i <= n1; ++i) tu.push_back(0.0);
  for (int i = 0; i <= n1; ++i) tu.push_back(1.0);
  for (int i = 0; i <= n2; ++i) tv.push_back(0.0);
  for (int i = 0; i <= n2; ++i) tv.push_back(1.0);
  return TensorSurface(KnotVector(n1, tu), KnotVector(n2, tv), std::move(net));
}

namespace {

// Taylor patch x = sum u^j v^k / (j! k!) xi_{j,k}; degree (2,2) or (3,3).
TensorSurface taylor_patch(const Vec3& xi10, const Vec3& xi01, const Vec3& xi20,
                           const Vec3& xi11, const Vec3& xi02,
                           const Vec3* cubic = nullptr) {
  const int deg = cubic ? 3 : 2;
  std::vector<std::vector<Vec3>> coef(deg + 1, std::vector<Vec3>(deg + 1, Vec3::Zero()));
  coef[1][0] = xi10;
  coef[0][1] = xi01;
  coef[2][0] = xi20 / 2.0;
  coef[1][1] = xi11;
  coef[0][2] = xi02 / 2.0;
  if (cubic) {
    coef[3][0] = cubic[0] / 6.0;  // xi30
    coef[2][1] = cubic[1] / 2.0;  // xi21
    coef[1][2] = cubic[2] / 2.0;  // xi12
    coef[0][3] = cubic[3] / 6.0;  // xi03
  }
  return bezier_from_polynomial(coef);
}

}  // namespace

std::vector<std::string> fixture_names() {
  return {"self_intersect",      "rounded_quadratic", "rounded_cubic",
          "discont_independent", "discont_opposite",  "degenerate"};
}

TensorSurface make_fixture(const std::string& name) {
  if (name == "self_intersect") {
    // x = Re((u+iv)^7), y = same with u,v exchanged, z = u^10 + v^10
    std::vector<std::vector<Vec3>> coef(11, std::vector<Vec3>(11, Vec3::Zero()));
    coef[7][0](0) = 1;
    coef[5][2](0) = -21;
    coef[3][4](0) = 35;
    coef[1][6](0) = -7;
    coef[0][7](1) = 1;
    coef[2][5](1) = -21;
    coef[4][3](1) = 35;
    coef[6][1](1) = -7;
    coef[10][0](2) = 1;
    coef[0][10](2) = 1;
    return bezier_from_polynomial(coef);
  }
  if (name == "rounded_quadratic") {
    // second-order data with a genuine normal component of xi11 so the
    // normal field varies in all three coordinates near the corner
    return taylor_patch({2, 0, 0}, {-1, 0, 0}, {0, 1, -2}, {0, 1, 1}, {0, 1, -0.5});
  }
  if (name == "rounded_cubic") {
    // second order as rounded, third-order terms with normal components so
    // the principal curvatures genuinely grow like 1/h toward the corner
    const Vec3 cubic[4] = {{0, 0.5, 3}, {0, 0, -1}, {0, 0.5, 2}, {0, 0, 1.5}};
    return taylor_patch({2, 0, 0}, {-1, 0, 0}, {0, 1, -2}, {0, 1, 1}, {0, 1, -0.5},
                        cubic);
  }
  if (name == "discont_independent") {
    return taylor_patch({1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 1});
  }
  if (name == "discont_opposite") {
    return taylor_patch({2, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, 0, 0}, {0, -2, -2});
  }
  if (name == "degenerate") {
    return taylor_patch({2, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, 0, 0}, {0, 0, 0});
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::vector<FieldSample> sample_field(const TensorSurface& s, int nu, int nv,
                                      const Vec3& iso_direction) {
  if (nu < 1 || nv < 1) throw std::invalid_argument("sample_field: need a positive grid");
  const Vec3 d = iso_direction.normalized();
  const double ua = s.ku().start(), ub = s.ku().end();
  const double va = s.kv().start(), vb = s.kv().end();
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(nu + 1) * (nv + 1));
  for (int i = 0; i <= nu; ++i) {
    for (int j = 0; j <= nv; ++j) {
      FieldSample fs;
      fs.u = ua + (ub - ua) * i / nu;
      fs.v = va + (vb - va) * j / nv;
      fs.x = s.eval(fs.u, fs.v);
      try {
        const FundamentalForms f = fundamental_forms(s, fs.u, fs.v);
        fs.nu = normal_vector(s, fs.u, fs.v);
        fs.kappa1 = f.kappa1;
        fs.kappa2 = f.kappa2;
        fs.isophote = fs.nu.dot(d);
      } catch (const DegeneratePointError&) {
        fs.regular = false;
        fs.nu = Vec3::Constant(std::nan(""));
        fs.kappa1 = fs.kappa2 = fs.isophote = std::nan("");
      }
      out.push_back(fs);
    }
  }
  return out;
}

}  // namespace rcsurf
