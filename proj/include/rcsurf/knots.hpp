#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rcsurf {

/// Clamped knot vector: first and last knot carry multiplicity degree+1,
/// interior multiplicities stay <= degree, and the first and last spans
/// are nonempty.
class KnotVector {
 public:
  KnotVector(int degree, std::vector<double> knots);

  int degree() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }

  /// Number of basis functions (= #knots - degree - 1).
  int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }

  double start() const { return knots_.front(); }
  double end() const { return knots_.back(); }

  /// Index k with knots[k] <= u < knots[k+1] (right-continuous convention);
  /// u == end() maps to the last nonempty span. Throws if u is outside
  /// [start, end].
  int find_span(double u) const;

  /// Breakpoints of the nonempty spans, start() and end() included.
  std::vector<double> breakpoints() const;

  /// Knot vector of the reversed parameter t -> start + end - t.
  KnotVector reversed() const;

  bool operator==(const KnotVector& o) const {
    return degree_ == o.degree_ && knots_ == o.knots_;
  }

 private:
  int degree_;
  std::vector<double> knots_;
};

/// Values (row 0) and derivatives (rows 1..order) of the degree+1 basis
/// functions that are nonzero at u. Column j corresponds to basis index
/// first + j.
struct BasisValues {
  int first = 0;
  Eigen::MatrixXd d;  // (order+1) x (degree+1)
};

/// Evaluates all nonzero B-spline basis functions and their derivatives
/// up to `order` at u. Requires 0 <= order <= degree and u in the knot range.
BasisValues basis_eval(const KnotVector& kv, double u, int order);

/// Uniform clamped knot vector with `spans` equal spans on [a, b].
KnotVector uniform_clamped_knots(int degree, int spans, double a, double b);

/// Gauss-Legendre rule with n points on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace rcsurf
