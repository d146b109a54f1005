#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dxa {

enum class QuadratureRule { composite_simpson, gauss_legendre };

// Resolution of a rule, independent of the interval it is applied to.
struct QuadratureSettings {
  int n_points = 4096;
  QuadratureRule rule = QuadratureRule::composite_simpson;
};

struct QuadratureSpec {
  double lower = 0.0;
  double upper = 1.0;
  int n_points = 4096;
  QuadratureRule rule = QuadratureRule::composite_simpson;

  static QuadratureSpec over(double lower, double upper, QuadratureSettings s = {}) {
    return {lower, upper, s.n_points, s.rule};
  }
  QuadratureSettings settings() const { return {n_points, rule}; }
};

void validate(const QuadratureSpec& spec);

/// Nodes and weights of a rule over [lower, upper].
///
/// Interior breakpoints split the interval into pieces that are integrated
/// separately, each receiving a share of n_points proportional to its length
/// (never fewer than 16). This keeps jumps of truncated densities on panel
/// boundaries. For Simpson, n_points counts subintervals and is rounded up to
/// an even number per piece; a breakpoint yields one node on each side.
/// For Gauss-Legendre, n_points is split into 16-node panels.
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  bool uniform = false;  // single Simpson piece: nodes equally spaced
};

QuadratureGrid make_grid(const QuadratureSpec& spec, std::span<const double> breakpoints = {});

/// Throws NumericError if f returns NaN or an infinity at any node.
double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec,
                 std::span<const double> breakpoints = {});

double integrate_values(const QuadratureGrid& grid, std::span<const double> values);

/// Running integral F(node_k) = \int_{lower}^{node_k} f, fourth-order accurate
/// per interval (Simpson with an extra midpoint evaluation).
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        std::span<const double> nodes);

}  // namespace dxa
