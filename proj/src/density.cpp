#include "dxa/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
// exp(-0.5 z^2) underflows to zero beyond this standardized distance.
constexpr double kUnderflowZ = 38.6;
constexpr int kBetaGrading = 60;  // dyadic levels, down to about 1e-18

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool finite(double x) { return std::isfinite(x); }

void check(const NormalParams& p) {
  if (!finite(p.mu) || !finite(p.sigma) || !(p.sigma > 0.0))
    throw DomainError("normal requires finite mu and sigma > 0");
}

void check(const TruncNormalParams& p) {
  if (!finite(p.mu) || !finite(p.sigma) || !(p.sigma > 0.0))
    throw DomainError("truncated normal requires finite mu and sigma > 0");
  if (!finite(p.a) || !finite(p.b) || !(p.a < p.b))
    throw DomainError("truncated normal requires finite a < b");
}

void check(const BetaParams& p) {
  if (!finite(p.a) || !finite(p.b) || !(p.a > 0.0) || !(p.b > 0.0))
    throw DomainError("beta requires positive shapes");
}

void check(const ExponentialParams& p) {
  if (!finite(p.lambda) || !(p.lambda > 0.0)) throw DomainError("exponential requires rate > 0");
}

void check(const MixtureModel& m) {
  if (m.weights.empty() || m.weights.size() != m.components.size())
    throw DomainError("mixture needs equal, nonempty weight and component lists");
  double total = 0.0;
  for (double w : m.weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("mixture weights must lie in [0, 1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
}

GridDensity normalized(GridDensity g) {
  if (g.grid.size() < 2 || g.grid.size() != g.values.size())
    throw DomainError("grid density needs >= 2 points and matching value count");
  double area = 0.0;
  for (std::size_t k = 0; k < g.grid.size(); ++k) {
    if (!finite(g.grid[k]) || !finite(g.values[k]) || g.values[k] < 0.0)
      throw DomainError("grid density values must be finite and nonnegative");
    if (k > 0) {
      if (!(g.grid[k] > g.grid[k - 1])) throw DomainError("grid must be strictly increasing");
      area += 0.5 * (g.values[k] + g.values[k - 1]) * (g.grid[k] - g.grid[k - 1]);
    }
  }
  if (!(area > 0.0)) throw DomainError("grid density has zero area");
  for (double& v : g.values) v /= area;
  return g;
}

double trunc_mass(const TruncNormalParams& p) {
  return normal_cdf((p.b - p.mu) / p.sigma) - normal_cdf((p.a - p.mu) / p.sigma);
}

// Upper-tail probability, accurate far into the right tail.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_quantile(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

double draw_trunc(const TruncNormalParams& p, Rng& rng) {
  const double lo = (p.a - p.mu) / p.sigma;
  const double hi = (p.b - p.mu) / p.sigma;
  const double mass = normal_cdf(hi) - normal_cdf(lo);
  if (mass > 0.25) {
    for (;;) {
      const double z = rng.normal();
      if (z >= lo && z <= hi) return p.mu + p.sigma * z;
    }
  }
  double z;
  if (lo >= 0.0) {
    // Both bounds in the right tail: invert the survival function.
    const double qa = normal_sf(lo);
    const double qb = normal_sf(hi);
    const double q = qb + rng.uniform() * (qa - qb);
    z = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
  } else if (hi <= 0.0) {
    const double pa = normal_cdf(lo);
    const double pb = normal_cdf(hi);
    z = normal_quantile(pa + rng.uniform() * (pb - pa));
  } else {
    const double pa = normal_cdf(lo);
    z = normal_quantile(pa + rng.uniform() * mass);
  }
  return p.mu + p.sigma * std::clamp(z, lo, hi);
}

}  // namespace

double normal_pdf(double y, double mu, double sigma) {
  const double z = (y - mu) / sigma;
  return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

Density::Density(NormalParams p) : v_(p) { check(p); }
Density::Density(TruncNormalParams p) : v_(p) { check(p); }
Density::Density(BetaParams p) : v_(p) { check(p); }
Density::Density(ExponentialParams p) : v_(p) { check(p); }
Density::Density(MixtureModel m) : v_((check(m), std::move(m))) {}
Density::Density(GridDensity g) : v_(normalized(std::move(g))) {}

double Density::operator()(double y) const { return eval_density(*this, y); }

double eval_density(const Density& d, double y) {
  return std::visit(
      overloaded{
          [y](const NormalParams& p) { return normal_pdf(y, p.mu, p.sigma); },
          [y](const TruncNormalParams& p) {
            if (y < p.a || y > p.b) return 0.0;
            return normal_pdf(y, p.mu, p.sigma) / trunc_mass(p);
          },
          [y](const BetaParams& p) {
            if (y < 0.0 || y > 1.0) return 0.0;
            // A singular endpoint is outside the open support and contributes nothing.
            if (y == 0.0) return p.a == 1.0 ? p.b : 0.0;
            if (y == 1.0) return p.b == 1.0 ? p.a : 0.0;
            const double lb = std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b);
            return std::exp((p.a - 1.0) * std::log(y) + (p.b - 1.0) * std::log1p(-y) - lb);
          },
          [y](const ExponentialParams& p) { return y < 0.0 ? 0.0 : p.lambda * std::exp(-p.lambda * y); },
          [y](const MixtureModel& m) {
            double total = 0.0;
            for (std::size_t k = 0; k < m.weights.size(); ++k)
              if (m.weights[k] > 0.0) total += m.weights[k] * eval_density(m.components[k], y);
            return total;
          },
          [y](const GridDensity& g) {
            if (y < g.grid.front() || y > g.grid.back()) return 0.0;
            const auto it = std::upper_bound(g.grid.begin(), g.grid.end(), y);
            if (it == g.grid.end()) return g.values.back();
            const std::size_t k = static_cast<std::size_t>(it - g.grid.begin());
            const double t = (y - g.grid[k - 1]) / (g.grid[k] - g.grid[k - 1]);
            return (1.0 - t) * g.values[k - 1] + t * g.values[k];
          },
      },
      d.variant());
}

double cdf(const Density& d, double y) {
  return std::visit(
      overloaded{
          [y](const NormalParams& p) { return normal_cdf((y - p.mu) / p.sigma); },
          [y](const TruncNormalParams& p) {
            if (y <= p.a) return 0.0;
            if (y >= p.b) return 1.0;
            const double lo = normal_cdf((p.a - p.mu) / p.sigma);
            return std::clamp((normal_cdf((y - p.mu) / p.sigma) - lo) / trunc_mass(p), 0.0, 1.0);
          },
          [y](const BetaParams& p) {
            if (y <= 0.0) return 0.0;
            if (y >= 1.0) return 1.0;
            return boost::math::ibeta(p.a, p.b, y);
          },
          [y](const ExponentialParams& p) { return y <= 0.0 ? 0.0 : -std::expm1(-p.lambda * y); },
          [y](const MixtureModel& m) {
            double total = 0.0;
            for (std::size_t k = 0; k < m.weights.size(); ++k)
              if (m.weights[k] > 0.0) total += m.weights[k] * cdf(m.components[k], y);
            return std::min(total, 1.0);
          },
          [y](const GridDensity& g) {
            if (y <= g.grid.front()) return 0.0;
            double acc = 0.0;
            for (std::size_t k = 1; k < g.grid.size(); ++k) {
              const double x0 = g.grid[k - 1];
              const double x1 = g.grid[k];
              if (y >= x1) {
                acc += 0.5 * (g.values[k - 1] + g.values[k]) * (x1 - x0);
                continue;
              }
              const double t = (y - x0) / (x1 - x0);
              const double fy = (1.0 - t) * g.values[k - 1] + t * g.values[k];
              acc += 0.5 * (g.values[k - 1] + fy) * (y - x0);
              break;
            }
            return std::min(acc, 1.0);
          },
      },
      d.variant());
}

Interval support(const Density& d) {
  return std::visit(overloaded{
                        [](const NormalParams&) { return Interval{-kInf, kInf}; },
                        [](const TruncNormalParams& p) { return Interval{p.a, p.b}; },
                        [](const BetaParams&) { return Interval{0.0, 1.0}; },
                        [](const ExponentialParams&) { return Interval{0.0, kInf}; },
                        [](const MixtureModel& m) {
                          Interval s{kInf, -kInf};
                          for (const auto& c : m.components) {
                            const auto cs = support(c);
                            s.lo = std::min(s.lo, cs.lo);
                            s.hi = std::max(s.hi, cs.hi);
                          }
                          return s;
                        },
                        [](const GridDensity& g) { return Interval{g.grid.front(), g.grid.back()}; },
                    },
                    d.variant());
}

Interval default_bounds(const Density& d) {
  return std::visit(
      overloaded{
          [](const NormalParams& p) { return Interval{p.mu - 10.0 * p.sigma, p.mu + 10.0 * p.sigma}; },
          [](const TruncNormalParams& p) { return Interval{p.a, p.b}; },
          [](const BetaParams&) { return Interval{0.0, 1.0}; },
          [](const ExponentialParams& p) { return Interval{0.0, 50.0 / p.lambda}; },
          [](const MixtureModel& m) {
            Interval s{kInf, -kInf};
            for (std::size_t k = 0; k < m.components.size(); ++k) {
              if (m.weights[k] <= 0.0) continue;
              const auto cs = default_bounds(m.components[k]);
              s.lo = std::min(s.lo, cs.lo);
              s.hi = std::max(s.hi, cs.hi);
            }
            return s;
          },
          [](const GridDensity& g) { return Interval{g.grid.front(), g.grid.back()}; },
      },
      d.variant());
}

Interval default_bounds(const Density& a, const Density& b) {
  const auto x = default_bounds(a);
  const auto y = default_bounds(b);
  return {std::min(x.lo, y.lo), std::max(x.hi, y.hi)};
}

std::vector<double> breakpoints(const Density& d) {
  return std::visit(overloaded{
                        [](const NormalParams&) { return std::vector<double>{}; },
                        [](const TruncNormalParams& p) { return std::vector<double>{p.a, p.b}; },
                        [](const BetaParams& p) {
                          // Geometric grading toward endpoints where the density or
                          // its low-order derivatives blow up.
                          auto rough = [](double s) { return s < 4.0 && s != std::floor(s); };
                          std::vector<double> out{0.0, 1.0};
                          for (int k = 1; k <= kBetaGrading; ++k) {
                            const double e = std::ldexp(1.0, -k);
                            if (rough(p.a)) out.push_back(e);
                            if (rough(p.b)) out.push_back(1.0 - e);
                          }
                          std::sort(out.begin(), out.end());
                          return out;
                        },
                        [](const ExponentialParams& p) {
                          // Dyadic multiples of the mean keep panels fine where the density is steep.
                          std::vector<double> out{0.0};
                          for (int j = -4; j <= 5; ++j) out.push_back(std::ldexp(1.0, j) / p.lambda);
                          return out;
                        },
                        [](const MixtureModel& m) {
                          std::vector<double> out;
                          for (const auto& c : m.components) {
                            const auto b = breakpoints(c);
                            out.insert(out.end(), b.begin(), b.end());
                          }
                          std::sort(out.begin(), out.end());
                          out.erase(std::unique(out.begin(), out.end()), out.end());
                          return out;
                        },
                        [](const GridDensity& g) {
                          return std::vector<double>{g.grid.front(), g.grid.back()};
                        },
                    },
                    d.variant());
}

QuadratureSpec default_spec(const Density& d, QuadratureSettings s) {
  const auto b = default_bounds(d);
  return QuadratureSpec::over(b.lo, b.hi, s);
}

double draw(const Density& d, Rng& rng) {
  return std::visit(overloaded{
                        [&](const NormalParams& p) { return rng.normal(p.mu, p.sigma); },
                        [&](const TruncNormalParams& p) { return draw_trunc(p, rng); },
                        [&](const BetaParams& p) {
                          const double x = rng.gamma(p.a);
                          const double y = rng.gamma(p.b);
                          return x / (x + y);
                        },
                        [&](const ExponentialParams& p) { return -std::log(rng.uniform()) / p.lambda; },
                        [&](const MixtureModel& m) {
                          double u = rng.uniform();
                          std::size_t k = 0;
                          for (; k + 1 < m.weights.size(); ++k) {
                            u -= m.weights[k];
                            if (u < 0.0) break;
                          }
                          return draw(m.components[k], rng);
                        },
                        [](const GridDensity&) -> double {
                          throw DomainError("sampling from a grid density is not supported");
                        },
                    },
                    d.variant());
}

std::vector<double> sample(const Density& d, std::size_t n, Rng& rng) {
  if (n < 1) throw DomainError("sample size must be >= 1");
  std::vector<double> out(n);
  for (auto& y : out) y = draw(d, rng);
  return out;
}

std::vector<double> sample(const Density& d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(d, n, rng);
}

double NormalMixture::eval(double y) const {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * normal_pdf(y, means[k], sds[k]);
  return total;
}

double NormalMixture::cdf(double y) const {
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) total += weights[k] * normal_cdf((y - means[k]) / sds[k]);
  return std::min(total, 1.0);
}

Interval NormalMixture::bounds(double min_weight) const {
  Interval s{kInf, -kInf};
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] < min_weight) continue;
    s.lo = std::min(s.lo, means[k] - 10.0 * sds[k]);
    s.hi = std::max(s.hi, means[k] + 10.0 * sds[k]);
  }
  if (s.lo > s.hi) return bounds(0.0);
  return s;
}

void NormalMixture::accumulate(std::span<const double> nodes, std::span<double> out) const {
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double w = weights[k];
    if (w <= 0.0) continue;
    const double mu = means[k];
    const double inv = 1.0 / sds[k];
    const double scale = w * kInvSqrt2Pi * inv;
    const auto first = std::lower_bound(nodes.begin(), nodes.end(), mu - kUnderflowZ * sds[k]);
    const auto last = std::upper_bound(first, nodes.end(), mu + kUnderflowZ * sds[k]);
    for (auto it = first; it != last; ++it) {
      const double z = (*it - mu) * inv;
      out[static_cast<std::size_t>(it - nodes.begin())] += scale * std::exp(-0.5 * z * z);
    }
  }
}

Density NormalMixture::to_density() const {
  MixtureModel m;
  m.weights = weights;
  for (std::size_t k = 0; k < weights.size(); ++k) m.components.emplace_back(NormalParams{means[k], sds[k]});
  return Density(std::move(m));
}

NormalMixture NormalMixture::from(const MixtureModel& m) {
  NormalMixture out;
  for (std::size_t k = 0; k < m.components.size(); ++k) {
    const auto* p = std::get_if<NormalParams>(&m.components[k].variant());
    if (!p) throw DomainError("mixture component " + std::to_string(k) + " is not normal");
    out.weights.push_back(m.weights[k]);
    out.means.push_back(p->mu);
    out.sds.push_back(p->sigma);
  }
  return out;
}

}  // namespace dxa
