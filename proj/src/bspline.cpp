#include "dxa/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "dxa/errors.hpp"

namespace dxa {

BSplineBasis::BSplineBasis(std::vector<double> interior_knots) : interior_(std::move(interior_knots)) {
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    if (!(interior_[k] > -1.0 && interior_[k] < 1.0))
      throw DomainError("interior knots must lie strictly inside (-1, 1)");
    if (k > 0 && !(interior_[k] > interior_[k - 1]))
      throw DomainError("interior knots must be strictly increasing");
  }
  knots_.assign(kOrder, -1.0);
  knots_.insert(knots_.end(), interior_.begin(), interior_.end());
  knots_.insert(knots_.end(), kOrder, 1.0);
}

std::vector<double> BSplineBasis::evaluate(double x) const {
  std::vector<double> out(static_cast<std::size_t>(dimension()));
  evaluate(x, out.data());
  return out;
}

// Cox-de Boor recursion in triangular form: starting from the order-1
// indicator of the knot span containing x, raise the degree one step at a
// time. Only the kOrder functions that are nonzero on the span are formed.
void BSplineBasis::evaluate(double x, double* out) const {
  if (!(x >= -1.0 && x <= 1.0)) throw DomainError("B-spline covariate must lie in [-1, 1]");
  const int dim = dimension();
  std::fill(out, out + dim, 0.0);

  // Span index: knots_[span] <= x < knots_[span + 1], with x = 1 folded into
  // the last nonempty span.
  int span = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin()) - 1;
  span = std::clamp(span, kOrder - 1, dim - 1);

  double left[kOrder];
  double right[kOrder];
  double n[kOrder];
  n[0] = 1.0;
  for (int j = 1; j < kOrder; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = n[r] / (right[r + 1] + left[j - r]);
      n[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    n[j] = saved;
  }
  for (int j = 0; j < kOrder; ++j) out[span - (kOrder - 1) + j] = n[j];
}

}  // namespace dxa
