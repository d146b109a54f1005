#include "dxa/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "dxa/errors.hpp"

namespace dxa {

std::pair<std::vector<double>, AffineMap> rescale_covariate(std::span<const double> xs) {
  if (xs.size() < 2) throw DataError("covariate rescaling needs at least two values");
  for (double x : xs)
    if (!std::isfinite(x)) throw DataError("covariate contains a non-finite value");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (!(*hi > *lo)) throw DataError("covariate is constant; cannot rescale to [-1, 1]");
  const AffineMap map{*lo, *hi};
  return {rescale_with(xs, map), map};
}

std::vector<double> rescale_with(std::span<const double> xs, const AffineMap& map) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Endpoints are pinned so rounding never pushes them outside [-1, 1].
    if (xs[i] == map.min)
      out[i] = -1.0;
    else if (xs[i] == map.max)
      out[i] = 1.0;
    else
      out[i] = map.forward(xs[i]);
  }
  return out;
}

std::pair<std::vector<double>, Standardization> standardize(std::span<const double> ys) {
  const std::size_t n = ys.size();
  if (n < 2) throw DataError("standardization needs at least two observations");
  double mean = 0.0;
  for (double y : ys) {
    if (!std::isfinite(y)) throw DataError("biomarker contains a non-finite value");
    mean += y;
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double y : ys) ss += (y - mean) * (y - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DataError("biomarker has zero variance");
  const Standardization s{mean, sd};
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = s.apply(ys[i]);
  return {std::move(z), s};
}

}  // namespace dxa
