#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "dxa/quadrature.hpp"
#include "dxa/rng.hpp"

namespace dxa {

struct NormalParams {
  double mu = 0.0;
  double sigma = 1.0;  // standard deviation
};

struct TruncNormalParams {
  double a = -1.0;  // lower bound
  double b = 1.0;   // upper bound
  double mu = 0.0;
  double sigma = 1.0;
};

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

struct ExponentialParams {
  double lambda = 1.0;  // rate
};

// Piecewise-linear density through (grid[k], values[k]), zero outside the
// grid. Renormalized on construction so the trapezoid integral is exactly 1.
struct GridDensity {
  std::vector<double> grid;
  std::vector<double> values;
};

class Density;

struct MixtureModel {
  std::vector<double> weights;
  std::vector<Density> components;
};

struct Interval {
  double lo;
  double hi;
};

/// A univariate density: one of the parametric families, a finite mixture of
/// densities, or a tabulated grid. Parameters are validated on construction.
class Density {
 public:
  using Variant = std::variant<NormalParams, TruncNormalParams, BetaParams, ExponentialParams,
                               MixtureModel, GridDensity>;

  Density(NormalParams p);
  Density(TruncNormalParams p);
  Density(BetaParams p);
  Density(ExponentialParams p);
  Density(MixtureModel m);
  Density(GridDensity g);

  const Variant& variant() const { return v_; }

  double operator()(double y) const;

 private:
  Variant v_;
};

double eval_density(const Density& d, double y);
double cdf(const Density& d, double y);

// Mathematical support (may be infinite).
Interval support(const Density& d);

// Finite integration range: mu +/- 10 sd for normals, exact bounds for
// bounded families, [0, 50 / lambda] for exponentials, hull for mixtures.
Interval default_bounds(const Density& d);
Interval default_bounds(const Density& a, const Density& b);

// Points where the density or its derivatives jump (truncation and support
// edges). Quadrature pieces are split there.
std::vector<double> breakpoints(const Density& d);

QuadratureSpec default_spec(const Density& d, QuadratureSettings s = {});

std::vector<double> sample(const Density& d, std::size_t n, std::uint64_t seed);
std::vector<double> sample(const Density& d, std::size_t n, Rng& rng);
double draw(const Density& d, Rng& rng);

double normal_pdf(double y, double mu, double sigma);
double normal_cdf(double z);  // standard normal

/// Flat normal mixture used on the hot paths of posterior evaluation.
struct NormalMixture {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> sds;

  std::size_t size() const { return weights.size(); }
  double eval(double y) const;
  double cdf(double y) const;

  // Hull of mean +/- 10 sd over components whose weight is at least min_weight.
  Interval bounds(double min_weight = 0.0) const;

  // Adds the mixture density at every node to out (out.size() == nodes.size()).
  // Components are skipped where they underflow.
  void accumulate(std::span<const double> nodes, std::span<double> out) const;

  Density to_density() const;
  static NormalMixture from(const MixtureModel& m);  // throws if any component is not normal
};

}  // namespace dxa
