#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dxa {

// Affine map of [min, max] onto [-1, 1].
struct AffineMap {
  double min = -1.0;
  double max = 1.0;

  double forward(double x) const { return (2.0 * x - min - max) / (max - min); }
  double inverse(double u) const { return 0.5 * (u * (max - min) + min + max); }
};

// z = (y - location) / scale, scale being the n - 1 sample standard deviation.
struct Standardization {
  double location = 0.0;
  double scale = 1.0;

  double apply(double y) const { return (y - location) / scale; }
  double invert(double z) const { return location + scale * z; }
};

std::pair<std::vector<double>, AffineMap> rescale_covariate(std::span<const double> xs);
std::vector<double> rescale_with(std::span<const double> xs, const AffineMap& map);

std::pair<std::vector<double>, Standardization> standardize(std::span<const double> ys);

}  // namespace dxa
