#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rcsurf/knots.hpp"
#include "rcsurf/surface.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rcsurf;
using namespace rcsurf::testing;

namespace {

TensorSurface bilinear_patch() {
  KnotVector k(1, {0, 0, 1, 1});
  return TensorSurface(k, k, {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}});
}

TensorSurface biquadratic_example() {
  KnotVector k(2, {0, 0, 0, 1, 1, 1});
  // the rounded-corner example net used throughout the corner tests
  std::vector<Vec3> net = {
      {0, 0, 0},  {-1, 0, 0}, {-1, 1, 0},  // j = 0 row (u index 0)
      {1, 0, 0},  {0, 1, 0},  {-0.6, 2, 0.2},
      {1, 1, 0},  {1.2, 2, 0.1}, {0.5, 3, 0.4}};
  return TensorSurface(k, k, net);
}

}  // namespace

TEST_CASE("knot vector validation") {
  CHECK_NOTHROW(KnotVector(2, {0, 0, 0, 1, 1, 1}));
  CHECK_NOTHROW(KnotVector(2, {0, 0, 0, 0.5, 0.5, 1, 1, 1}));
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1}), std::invalid_argument);            // unclamped
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 1, 0.5, 1, 1, 1}), std::invalid_argument);  // decreasing
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.5, 0.5, 0.5, 1, 1, 1}),
                  std::invalid_argument);  // interior multiplicity 3 > degree
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0, 1, 1, 1}), std::invalid_argument);  // empty first span
}

TEST_CASE("basis values on the Bernstein case") {
  KnotVector kv(2, {0, 0, 0, 1, 1, 1});
  const BasisValues b = basis_eval(kv, 0.5, 0);
  REQUIRE(b.first == 0);
  CHECK(b.d(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b.d(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(b.d(0, 2) == doctest::Approx(0.25).epsilon(1e-14));

  const BasisValues e = basis_eval(kv, 0.0, 0);
  CHECK(e.d(0, 0) == doctest::Approx(1.0));
  CHECK(e.d(0, 1) == doctest::Approx(0.0));
  CHECK(e.d(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("basis values match the recurrence-by-definition oracle") {
  KnotVector kv(3, {0, 0, 0, 0, 1, 2, 2, 2, 2});
  const double u = 0.7;
  const BasisValues b = basis_eval(kv, u, 0);
  double sum = 0;
  for (int j = 0; j <= 3; ++j) {
    sum += b.d(0, j);
    const double oracle = basis_by_definition(kv.knots(), 3, b.first + j, u);
    CHECK(b.d(0, j) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("basis errors") {
  KnotVector kv(2, {0, 0, 0, 1, 1, 1});
  CHECK_THROWS_AS(basis_eval(kv, -0.1, 0), std::domain_error);
  CHECK_THROWS_AS(basis_eval(kv, 1.1, 0), std::domain_error);
  CHECK_THROWS_AS(basis_eval(kv, 0.5, 3), std::invalid_argument);  // order > degree
}

TEST_CASE("partition of unity and derivative sums over random knots") {
  Rng rng(101);
  for (int trial = 0; trial < 8; ++trial) {
    const int deg = std::uniform_int_distribution<int>(1, 5)(rng);
    const KnotVector kv = random_knots(rng, deg, 0.0, uniform(rng, 0.5, 3.0));
    const int order = std::min(deg, 3);
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform(rng, kv.start(), kv.end());
      const BasisValues b = basis_eval(kv, u, order);
      double s0 = 0;
      for (int j = 0; j <= deg; ++j) {
        CHECK(b.d(0, j) >= -1e-14);
        s0 += b.d(0, j);
      }
      CHECK(s0 == doctest::Approx(1.0).epsilon(1e-12));
      for (int k = 1; k <= order; ++k) {
        double sk = 0;
        for (int j = 0; j <= deg; ++j) sk += b.d(k, j);
        CHECK(std::abs(sk) < 1e-9 * std::max(1.0, b.d.row(k).cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("span lookup conventions") {
  KnotVector kv(2, {0, 0, 0, 0.5, 0.5, 1, 1, 1});
  CHECK(kv.find_span(0.0) == 2);
  CHECK(kv.find_span(0.49) == 2);
  CHECK(kv.find_span(0.5) == 4);   // right-continuous across the double knot
  CHECK(kv.find_span(1.0) == 4);   // domain end maps into the last nonempty span
  CHECK(kv.breakpoints() == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("bilinear patch interpolates its corners") {
  const TensorSurface s = bilinear_patch();
  CHECK((s.eval(0.5, 0.5) - Vec3(0.5, 0.5, 0)).norm() < 1e-15);
  CHECK((s.eval(0, 0) - Vec3(0, 0, 0)).norm() < 1e-15);
  CHECK((s.eval(1, 1) - Vec3(1, 1, 0)).norm() < 1e-15);
}

TEST_CASE("biquadratic Bezier corner derivative equals 2(p10 - p00)") {
  const TensorSurface s = biquadratic_example();
  const Vec3 expect = 2.0 * (s.cp(1, 0) - s.cp(0, 0));
  CHECK((s.eval(0, 0, 1, 0) - expect).norm() < 1e-14);
  const Vec3 expect_v = 2.0 * (s.cp(0, 1) - s.cp(0, 0));
  CHECK((s.eval(0, 0, 0, 1) - expect_v).norm() < 1e-14);
}

TEST_CASE("analytic derivatives match finite differences") {
  Rng rng(202);
  auto away_from_knots = [](const KnotVector& kv, double x, double margin) {
    for (double b : kv.breakpoints())
      if (std::abs(x - b) < margin && x != kv.start() && x != kv.end()) return false;
    return true;
  };
  for (int trial = 0; trial < 4; ++trial) {
    const TensorSurface s = random_surface(rng, 3, 3);
    int accepted = 0;
    while (accepted < 100) {
      const double u = uniform(rng, s.ku().start(), s.ku().end());
      const double v = uniform(rng, s.kv().start(), s.kv().end());
      // FD stencils must not straddle a breakpoint
      if (!away_from_knots(s.ku(), u, 5e-4) || !away_from_knots(s.kv(), v, 5e-4))
        continue;
      ++accepted;
      for (auto [ju, jv] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}) {
        const double h = (ju + jv >= 2) ? 1e-4 : 1e-5;  // noise floor of order-2 stencils
        const Vec3 exact = s.eval(u, v, ju, jv);
        const Vec3 approx = fd_derivative(s, u, v, ju, jv, h);
        const double scale = std::max(exact.norm(), 1.0);
        CHECK((exact - approx).norm() / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("random cubic mixed derivative against the FD oracle at rel 1e-6") {
  Rng rng(203);
  const TensorSurface s = random_surface(rng, 3, 3);
  // middle of the first span, clear of breakpoints for the central stencil
  const double u = 0.5 * (s.ku().breakpoints()[0] + s.ku().breakpoints()[1]);
  const double v = 0.5 * (s.kv().breakpoints()[0] + s.kv().breakpoints()[1]);
  const Vec3 exact = s.eval(u, v, 1, 1);
  const Vec3 approx = fd_derivative(s, u, v, 1, 1, 1e-5);
  CHECK((exact - approx).norm() / std::max(exact.norm(), 1e-12) < 1e-6);
}

TEST_CASE("affine invariance of evaluation") {
  Rng rng(204);
  const TensorSurface s = random_surface(rng);
  const Eigen::Matrix3d M = random_rotation(rng) * 1.7;
  const Vec3 shift = random_vec3(rng, 3.0);
  std::vector<Vec3> net = s.net();
  for (Vec3& p : net) p = M * p + shift;
  const TensorSurface ms(s.ku(), s.kv(), net);
  for (int i = 0; i < 50; ++i) {
    const double u = uniform(rng, s.ku().start(), s.ku().end());
    const double v = uniform(rng, s.kv().start(), s.kv().end());
    const Vec3 a = ms.eval(u, v);
    const Vec3 b = M * s.eval(u, v) + shift;
    CHECK((a - b).norm() < 1e-12 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("evaluation stays inside the control-net bounding box") {
  Rng rng(205);
  const TensorSurface s = random_surface(rng);
  Vec3 lo = s.net().front(), hi = s.net().front();
  for (const Vec3& p : s.net()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (int i = 0; i < 200; ++i) {
    const double u = uniform(rng, s.ku().start(), s.ku().end());
    const double v = uniform(rng, s.kv().start(), s.kv().end());
    const Vec3 x = s.eval(u, v);
    for (int c = 0; c < 3; ++c) {
      CHECK(x(c) >= lo(c) - 1e-12);
      CHECK(x(c) <= hi(c) + 1e-12);
    }
  }
}

TEST_CASE("out-of-domain evaluation throws") {
  const TensorSurface s = biquadratic_example();
  CHECK_THROWS_AS(s.eval(-0.01, 0.5), std::domain_error);
  CHECK_THROWS_AS(s.eval(0.5, 1.01), std::domain_error);
}

TEST_CASE("corner jet: closed-form formulas at a Bezier corner") {
  const TensorSurface s = biquadratic_example();
  const CornerJet jet = corner_jet(s, Corner::U0V0);
  CHECK((jet.xi10 - 2.0 * (s.cp(1, 0) - s.cp(0, 0))).norm() < 1e-14);
  CHECK((jet.xi01 - 2.0 * (s.cp(0, 1) - s.cp(0, 0))).norm() < 1e-14);
}

TEST_CASE("corner jet matches finite differences on a cubic with interior knot") {
  KnotVector k(3, {0, 0, 0, 0, 0.5, 1, 1, 1, 1});
  Rng rng(206);
  std::vector<Vec3> net;
  for (int j = 0; j < 5; ++j)
    for (int kk = 0; kk < 5; ++kk) net.push_back(Vec3(j, kk, 0) + random_vec3(rng, 0.3));
  const TensorSurface s(k, k, net);
  const CornerJet jet = corner_jet(s, Corner::U0V0);
  const Vec3* entries[6] = {&jet.xi00, &jet.xi10, &jet.xi01, &jet.xi20, &jet.xi11, &jet.xi02};
  const std::pair<int, int> orders[6] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) {
    // one-sided stencils stay inside the first polynomial piece (3h < 0.5)
    const Vec3 fd = fd_derivative(s, 0.0, 0.0, orders[i].first, orders[i].second, 1e-4);
    CHECK((*entries[i] - fd).norm() / std::max(fd.norm(), 1.0) < 1e-6);
  }
}

TEST_CASE("corner jet dual-path agreement on random surfaces and all corners") {
  Rng rng(207);
  for (int trial = 0; trial < 50; ++trial) {
    const TensorSurface s = random_surface(rng);
    for (Corner c : {Corner::U0V0, Corner::U1V0, Corner::U0V1, Corner::U1V1})
      CHECK_NOTHROW(corner_jet(s, c));  // throws on >1e-10 relative disagreement
  }
}

TEST_CASE("corner jet rejects low degrees") {
  const TensorSurface s = bilinear_patch();
  CHECK_THROWS_AS(corner_jet(s, Corner::U0V0), std::invalid_argument);
}

TEST_CASE("corner jet respects the local orientation") {
  const TensorSurface s = biquadratic_example();
  const CornerJet j11 = corner_jet(s, Corner::U1V1);
  // local first partials at (1,1) point back into the domain
  CHECK((j11.xi10 - 2.0 * (s.cp(1, 2) - s.cp(2, 2))).norm() < 1e-13);
  CHECK((j11.xi01 - 2.0 * (s.cp(2, 1) - s.cp(2, 2))).norm() < 1e-13);
}

TEST_CASE("quadrature: single span sums to the area and integrates cubics") {
  KnotVector k(1, {0, 0, 1, 1});
  const TensorSurface s = bilinear_patch();
  const auto nodes = quadrature_grid(s, 2);
  REQUIRE(nodes.size() == 4);
  double wsum = 0, moment = 0;
  for (const QuadNode& q : nodes) {
    wsum += q.w;
    moment += q.w * q.u * q.u * q.u * q.v * q.v * q.v;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("quadrature: node counts and weight sums over multiple spans") {
  const KnotVector ku = uniform_clamped_knots(2, 4, 0.0, 2.0);
  const KnotVector kv = uniform_clamped_knots(2, 4, 0.0, 3.0);
  std::vector<Vec3> net(static_cast<std::size_t>(ku.num_basis()) * kv.num_basis(),
                        Vec3::Zero());
  const TensorSurface s(ku, kv, net);
  const auto nodes = quadrature_grid(s, 3);
  CHECK(nodes.size() == 144);
  double wsum = 0;
  for (const QuadNode& q : nodes) wsum += q.w;
  CHECK(wsum == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("quadrature skips empty spans") {
  KnotVector k(2, {0, 0, 0, 0.5, 0.5, 1, 1, 1});
  std::vector<Vec3> net(static_cast<std::size_t>(k.num_basis()) * k.num_basis(),
                        Vec3::Zero());
  const TensorSurface s(k, k, net);
  const auto nodes = quadrature_grid(s, 2);
  CHECK(nodes.size() == 16);  // 2 nonempty spans per direction, 2x2 points each
  double wsum = 0;
  for (const QuadNode& q : nodes) wsum += q.w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauss rule integrates high-order monomials") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  double v = 0;
  for (int i = 0; i < 6; ++i) v += w[i] * std::pow(x[i], 10);
  CHECK(v == doctest::Approx(2.0 / 11.0).epsilon(1e-13));  // exact through degree 11
}
