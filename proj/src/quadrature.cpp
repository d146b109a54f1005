#include "dxa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

constexpr int kGaussOrder = 16;
constexpr int kMinPiecePoints = 32;

std::vector<double> piece_edges(const QuadratureSpec& spec, std::span<const double> breakpoints) {
  std::vector<double> edges{spec.lower};
  std::vector<double> inner(breakpoints.begin(), breakpoints.end());
  std::sort(inner.begin(), inner.end());
  for (double b : inner) {
    if (b > edges.back() && b < spec.upper) edges.push_back(b);
  }
  edges.push_back(spec.upper);
  return edges;
}

int share(int total, double piece, double whole) {
  const int n = static_cast<int>(std::ceil(total * piece / whole));
  return std::max(n, kMinPiecePoints);
}

// Endpoints that sit on an interior breakpoint are evaluated one ulp inside
// the piece, so each side of a jump sees its own one-sided limit.
void append_simpson(QuadratureGrid& g, double a, double b, int intervals, bool inner_a, bool inner_b) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  for (int k = 0; k <= intervals; ++k) {
    const double w = (k == 0 || k == intervals) ? h / 3.0 : (k % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    double x = (k == intervals) ? b : a + k * h;
    if (k == 0 && inner_a) x = std::nextafter(a, b);
    if (k == intervals && inner_b) x = std::nextafter(b, a);
    g.nodes.push_back(x);
    g.weights.push_back(w);
  }
}

void append_gauss(QuadratureGrid& g, double a, double b, int points) {
  using rule = boost::math::quadrature::gauss<double, kGaussOrder>;
  const auto& abscissa = rule::abscissa();
  const auto& weight = rule::weights();
  const int panels = std::max(1, points / kGaussOrder);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    const double half = 0.5 * width;
    // Emit nodes in increasing order: negative abscissae first.
    for (int k = static_cast<int>(abscissa.size()) - 1; k >= 0; --k) {
      g.nodes.push_back(mid - half * abscissa[k]);
      g.weights.push_back(half * weight[k]);
    }
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      g.nodes.push_back(mid + half * abscissa[k]);
      g.weights.push_back(half * weight[k]);
    }
  }
}

}  // namespace

void validate(const QuadratureSpec& spec) {
  if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) || !(spec.lower < spec.upper))
    throw DomainError("quadrature bounds must be finite with lower < upper");
  if (spec.n_points < 16) throw DomainError("quadrature needs n_points >= 16");
}

QuadratureGrid make_grid(const QuadratureSpec& spec, std::span<const double> breakpoints) {
  validate(spec);
  const auto edges = piece_edges(spec, breakpoints);
  const double whole = spec.upper - spec.lower;
  QuadratureGrid grid;
  grid.uniform = spec.rule == QuadratureRule::composite_simpson && edges.size() == 2;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const int n = edges.size() == 2 ? spec.n_points : share(spec.n_points, edges[i + 1] - edges[i], whole);
    if (spec.rule == QuadratureRule::composite_simpson)
      append_simpson(grid, edges[i], edges[i + 1], n, i > 0, i + 2 < edges.size());
    else
      append_gauss(grid, edges[i], edges[i + 1], n);
  }
  return grid;
}

double integrate_values(const QuadratureGrid& grid, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) total += grid.weights[k] * values[k];
  return total;
}

double integrate(const std::function<double(double)>& f, const QuadratureSpec& spec,
                 std::span<const double> breakpoints) {
  const auto grid = make_grid(spec, breakpoints);
  double total = 0.0;
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double v = f(grid.nodes[k]);
    if (!std::isfinite(v))
      throw NumericError("integrand is not finite at y = " + std::to_string(grid.nodes[k]));
    total += grid.weights[k] * v;
  }
  return total;
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        std::span<const double> nodes) {
  std::vector<double> out(nodes.size(), 0.0);
  if (nodes.empty()) return out;
  double prev = f(nodes[0]);
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double a = nodes[k - 1];
    const double b = nodes[k];
    const double mid = f(0.5 * (a + b));
    const double cur = f(b);
    if (!std::isfinite(mid) || !std::isfinite(cur))
      throw NumericError("integrand is not finite during cumulative quadrature");
    out[k] = out[k - 1] + (b - a) / 6.0 * (prev + 4.0 * mid + cur);
    prev = cur;
  }
  return out;
}

}  // namespace dxa
