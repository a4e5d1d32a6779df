#include "rcsurf/knots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcsurf {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 1) throw std::invalid_argument("knot vector: degree must be >= 1");
  const int m = static_cast<int>(knots_.size());
  if (m < 2 * (degree_ + 1))
    throw std::invalid_argument("knot vector: too few knots for the degree");
  for (int i = 0; i + 1 < m; ++i)
    if (knots_[i] > knots_[i + 1])
      throw std::invalid_argument("knot vector: knots must be nondecreasing");
  for (int i = 1; i <= degree_; ++i)
    if (knots_[i] != knots_.front() || knots_[m - 1 - i] != knots_.back())
      throw std::invalid_argument(
          "knot vector: boundary knots must have multiplicity degree+1 (clamped)");
  if (knots_[degree_ + 1] == knots_.front())
    throw std::invalid_argument("knot vector: first span must be nonempty");
  if (knots_[m - degree_ - 2] == knots_.back())
    throw std::invalid_argument("knot vector: last span must be nonempty");
  // interior multiplicity bound
  int run = 1;
  for (int i = degree_ + 2; i < m - degree_ - 1; ++i) {
    run = (knots_[i] == knots_[i - 1]) ? run + 1 : 1;
    if (run > degree_)
      throw std::invalid_argument(
          "knot vector: interior knot multiplicity exceeds the degree");
  }
}

int KnotVector::find_span(double u) const {
  if (u < start() || u > end())
    throw std::domain_error("parameter outside knot range");
  const int n = num_basis();
  if (u >= knots_[n]) {  // last nonempty span
    int k = n;
    while (knots_[k] == knots_[k - 1]) --k;
    return k - 1;
  }
  // binary search for knots[k] <= u < knots[k+1]
  int lo = degree_, hi = n;
  while (lo + 1 < hi) {
    const int mid = (lo + hi) / 2;
    if (u < knots_[mid])
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> b;
  for (std::size_t i = degree_; i + degree_ < knots_.size(); ++i)
    if (b.empty() || knots_[i] > b.back()) b.push_back(knots_[i]);
  return b;
}

KnotVector KnotVector::reversed() const {
  const double s = start() + end();
  std::vector<double> rev(knots_.rbegin(), knots_.rend());
  for (double& t : rev) t = s - t;
  return KnotVector(degree_, std::move(rev));
}

BasisValues basis_eval(const KnotVector& kv, double u, int order) {
  const int p = kv.degree();
  if (order < 0 || order > p)
    throw std::invalid_argument("basis_eval: derivative order exceeds the degree");
  const int span = kv.find_span(u);
  const auto& t = kv.knots();

  // Cox-de Boor triangle with stored knot differences, then the standard
  // derivative recurrence on the triangle rows.
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - t[span + 1 - j];
    right[j] = t[span + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }

  BasisValues out;
  out.first = span - p;
  out.d = Eigen::MatrixXd::Zero(order + 1, p + 1);
  for (int j = 0; j <= p; ++j) out.d(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= order; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      out.d(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= order; ++k) {
    out.d.row(k) *= factor;
    factor *= (p - k);
  }
  return out;
}

KnotVector uniform_clamped_knots(int degree, int spans, double a, double b) {
  if (spans < 1) throw std::invalid_argument("uniform_clamped_knots: spans must be >= 1");
  if (!(b > a)) throw std::invalid_argument("uniform_clamped_knots: empty domain");
  std::vector<double> t;
  t.reserve(2 * (degree + 1) + spans - 1);
  for (int i = 0; i <= degree; ++i) t.push_back(a);
  for (int i = 1; i < spans; ++i) t.push_back(a + (b - a) * i / spans);
  for (int i = 0; i <= degree; ++i) t.push_back(b);
  return KnotVector(degree, std::move(t));
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n starting from the Chebyshev-like guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

}  // namespace rcsurf
