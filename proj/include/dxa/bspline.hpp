#pragma once

#include <vector>

namespace dxa {

/// Order-4 (cubic) B-spline basis on [-1, 1] with boundary knots repeated
/// four times. With no interior knots it reduces to the cubic Bernstein
/// basis.
class BSplineBasis {
 public:
  static constexpr int kOrder = 4;

  explicit BSplineBasis(std::vector<double> interior_knots = {});

  int order() const { return kOrder; }
  int dimension() const { return static_cast<int>(interior_.size()) + kOrder; }
  const std::vector<double>& interior_knots() const { return interior_; }
  const std::vector<double>& knots() const { return knots_; }

  // Throws DomainError for x outside [-1, 1].
  std::vector<double> evaluate(double x) const;
  void evaluate(double x, double* out) const;

 private:
  std::vector<double> interior_;
  std::vector<double> knots_;
};

inline std::vector<double> bspline_design(double x, const BSplineBasis& basis) { return basis.evaluate(x); }

}  // namespace dxa
