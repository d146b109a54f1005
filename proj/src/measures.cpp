#include "dxa/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

constexpr double kUnitSlack = 1e-9;
constexpr double kPlateauTol = 1e-9;

double clamp_unit(double v, const char* what) {
  if (std::isnan(v)) throw NumericError(std::string(what) + " evaluated to NaN");
  if (v < 0.0) {
    if (v > -kUnitSlack) return 0.0;
    throw NumericError(std::string(what) + " is negative beyond quadrature noise");
  }
  if (v > 1.0) {
    if (v <= 1.0 + kUnitSlack) return 1.0;
    throw NumericError(std::string(what) + " exceeds 1 beyond quadrature noise: " + std::to_string(v));
  }
  return v;
}

DensityFn as_fn(const Density& d) {
  return [&d](double y) { return eval_density(d, y); };
}

// Cutoff grid for the Youden maximization: the hull of both supports, with
// infinite ends replaced by the default integration bounds.
std::vector<double> cutoff_grid(const TestPair& pair, int grid_size) {
  if (grid_size < 100) throw DomainError("Youden grid needs at least 100 cutoffs");
  const auto b = default_bounds(pair.diseased, pair.healthy);
  std::vector<double> c(static_cast<std::size_t>(grid_size));
  const double step = (b.hi - b.lo) / (grid_size - 1);
  for (int k = 0; k < grid_size; ++k) c[static_cast<std::size_t>(k)] = b.lo + k * step;
  c.back() = b.hi;
  return c;
}

template <class Objective>
YoudenResult maximize_on_grid(const std::vector<double>& cuts, Objective&& objective) {
  std::vector<double> val(cuts.size());
  for (std::size_t k = 0; k < cuts.size(); ++k) val[k] = objective(cuts[k]);
  std::size_t best = 0;
  for (std::size_t k = 1; k < cuts.size(); ++k)
    if (val[k] > val[best] + kPlateauTol) best = k;

  std::size_t end = best;
  while (end + 1 < cuts.size() && val[end + 1] >= val[best] - kPlateauTol) ++end;

  YoudenResult out{val[best], cuts[best], cuts[end]};
  // A run of three or more cutoffs is a plateau; two adjacent near-ties are a
  // smooth peak between them.
  if (end >= best + 2) return out;

  // Golden-section refinement inside the neighbouring grid cells.
  double lo = cuts[best > 0 ? best - 1 : 0];
  double hi = cuts[std::min(end + 1, cuts.size() - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double xr = f1 >= f2 ? x1 : x2;
  const double fr = std::max(f1, f2);
  if (fr > out.yi) out = {fr, xr, xr};
  return out;
}

// Beta(a, b) is square-integrable iff both shapes exceed 1/2; the other
// families always are.
bool square_integrable(const Density& d) {
  if (const auto* b = std::get_if<BetaParams>(&d.variant())) return b->a > 0.5 && b->b > 0.5;
  if (const auto* m = std::get_if<MixtureModel>(&d.variant()))
    return std::all_of(m->components.begin(), m->components.end(), square_integrable);
  return true;
}

}  // namespace

QuadratureSpec default_spec(const TestPair& pair, QuadratureSettings s) {
  const auto b = default_bounds(pair.diseased, pair.healthy);
  return QuadratureSpec::over(b.lo, b.hi, s);
}

std::vector<double> breakpoints(const TestPair& pair) {
  auto out = breakpoints(pair.diseased);
  const auto other = breakpoints(pair.healthy);
  out.insert(out.end(), other.begin(), other.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double affinity(const DensityFn& f_d, const DensityFn& f_nd, const QuadratureSpec& spec,
                std::span<const double> breaks) {
  const double v = integrate([&](double y) { return std::sqrt(f_d(y) * f_nd(y)); }, spec, breaks);
  return clamp_unit(v, "affinity");
}

double affinity(const TestPair& pair, const QuadratureSpec& spec) {
  const auto breaks = breakpoints(pair);
  return affinity(as_fn(pair.diseased), as_fn(pair.healthy), spec, breaks);
}

double affinity(const TestPair& pair, QuadratureSettings s) { return affinity(pair, default_spec(pair, s)); }

double affinity_curve(const TestPair& pair, double y) {
  return std::sqrt(eval_density(pair.diseased, y) * eval_density(pair.healthy, y));
}

double affinity_binormal(const NormalParams& d, const NormalParams& nd) {
  const double v2 = d.sigma * d.sigma + nd.sigma * nd.sigma;
  const double dm = d.mu - nd.mu;
  return std::sqrt(2.0 * d.sigma * nd.sigma / v2) * std::exp(-0.25 * dm * dm / v2);
}

double affinity_bibeta(const BetaParams& d, const BetaParams& nd) {
  auto lbeta = [](double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); };
  const double num = lbeta(0.5 * (d.a + nd.a), 0.5 * (d.b + nd.b));
  return std::exp(num - 0.5 * (lbeta(d.a, d.b) + lbeta(nd.a, nd.b)));
}

double affinity_biexponential(const ExponentialParams& d, const ExponentialParams& nd) {
  return 2.0 * std::sqrt(d.lambda * nd.lambda) / (d.lambda + nd.lambda);
}

double affinity_normalized(const TestPair& pair, const QuadratureSpec& spec) {
  const auto breaks = breakpoints(pair);
  const auto& fd = pair.diseased;
  const auto& fnd = pair.healthy;
  auto sq_norm = [&](const Density& f, const QuadratureSpec& s) {
    return integrate([&](double y) { const double v = eval_density(f, y); return v * v; }, s, breaks);
  };
  QuadratureSpec fine = spec;
  fine.n_points *= 2;
  double norms[2];
  const Density* arms[2] = {&fd, &fnd};
  for (int k = 0; k < 2; ++k) {
    if (!square_integrable(*arms[k])) throw DomainError("density is not square-integrable");
    double coarse;
    double refined;
    try {
      coarse = sq_norm(*arms[k], spec);
      refined = sq_norm(*arms[k], fine);
    } catch (const NumericError&) {
      throw DomainError("density is not square-integrable (squared norm is infinite)");
    }
    if (std::abs(refined - coarse) > 1e-6 * std::max(1.0, refined))
      throw DomainError("density is not square-integrable (squared norm diverges under refinement)");
    norms[k] = std::sqrt(refined);
  }
  const double inner =
      integrate([&](double y) { return eval_density(fd, y) * eval_density(fnd, y); }, fine, breaks);
  return clamp_unit(inner / (norms[0] * norms[1]), "normalized affinity");
}

double affinity_normalized(const TestPair& pair, QuadratureSettings s) {
  return affinity_normalized(pair, default_spec(pair, s));
}

double auc(const DensityFn& f_d, const DensityFn& f_nd, TestDirection dir, const QuadratureSpec& spec,
           std::span<const double> breaks) {
  // upper: integral of f_D * F_Dbar; lower: integral of f_Dbar * F_D.
  const DensityFn& outer = dir == TestDirection::upper_tailed ? f_d : f_nd;
  const DensityFn& inner = dir == TestDirection::upper_tailed ? f_nd : f_d;
  const auto grid = make_grid(spec, breaks);
  std::vector<double> nodes;
  nodes.reserve(grid.nodes.size() + 1);
  nodes.push_back(spec.lower);
  nodes.insert(nodes.end(), grid.nodes.begin(), grid.nodes.end());
  const auto running = cumulative_integral(inner, nodes);
  double total = 0.0;
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    const double v = outer(grid.nodes[k]);
    if (!std::isfinite(v)) throw NumericError("density is not finite inside AUC quadrature");
    total += grid.weights[k] * v * std::min(running[k + 1], 1.0);
  }
  return clamp_unit(total, "AUC");
}

double auc(const TestPair& pair, TestDirection dir, const QuadratureSpec& spec) {
  const auto breaks = breakpoints(pair);
  return auc(as_fn(pair.diseased), as_fn(pair.healthy), dir, spec, breaks);
}

double auc(const TestPair& pair, TestDirection dir, QuadratureSettings s) {
  return auc(pair, dir, default_spec(pair, s));
}

double auc_mixture_normal(const NormalMixture& d, const NormalMixture& nd) {
  double total = 0.0;
  for (std::size_t h = 0; h < d.size(); ++h) {
    if (d.weights[h] <= 0.0) continue;
    double row = 0.0;
    for (std::size_t k = 0; k < nd.size(); ++k) {
      const double s = std::sqrt(d.sds[h] * d.sds[h] + nd.sds[k] * nd.sds[k]);
      row += nd.weights[k] * normal_cdf((d.means[h] - nd.means[k]) / s);
    }
    total += d.weights[h] * row;
  }
  return std::clamp(total, 0.0, 1.0);
}

double auc_mixture_normal(const MixtureModel& d, const MixtureModel& nd) {
  return auc_mixture_normal(NormalMixture::from(d), NormalMixture::from(nd));
}

YoudenResult youden(const TestPair& pair, TestDirection dir, int grid_size) {
  const auto cuts = cutoff_grid(pair, grid_size);
  const double sign = dir == TestDirection::upper_tailed ? 1.0 : -1.0;
  auto objective = [&](double c) { return sign * (cdf(pair.healthy, c) - cdf(pair.diseased, c)); };
  auto r = maximize_on_grid(cuts, objective);
  r.yi = std::clamp(r.yi, 0.0, 1.0);
  return r;
}

YoudenResult youden_abs(const TestPair& pair, int grid_size) {
  const auto cuts = cutoff_grid(pair, grid_size);
  auto objective = [&](double c) { return std::abs(cdf(pair.healthy, c) - cdf(pair.diseased, c)); };
  auto r = maximize_on_grid(cuts, objective);
  r.yi = std::clamp(r.yi, 0.0, 1.0);
  return r;
}

double ovl(const TestPair& pair, const QuadratureSpec& spec) {
  const auto breaks = breakpoints(pair);
  const double v = integrate(
      [&](double y) { return std::min(eval_density(pair.diseased, y), eval_density(pair.healthy, y)); }, spec,
      breaks);
  return clamp_unit(v, "overlap coefficient");
}

double ovl(const TestPair& pair, QuadratureSettings s) { return ovl(pair, default_spec(pair, s)); }

std::vector<double> affinity_conditional(const ConditionalTestPair& cpair, std::span<const double> xs,
                                         QuadratureSettings s, Execution exec) {
  for (double x : xs)
    if (!(x >= cpair.domain.lo && x <= cpair.domain.hi))
      throw DomainError("covariate value outside the declared domain");
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), exec, [&](std::size_t i) {
    const TestPair pair{cpair.diseased(xs[i]), cpair.healthy(xs[i])};
    out[i] = affinity(pair, s);
  });
  return out;
}

std::vector<double> auc_conditional(const ConditionalTestPair& cpair, std::span<const double> xs,
                                    TestDirection dir, QuadratureSettings s, Execution exec) {
  for (double x : xs)
    if (!(x >= cpair.domain.lo && x <= cpair.domain.hi))
      throw DomainError("covariate value outside the declared domain");
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), exec, [&](std::size_t i) {
    const TestPair pair{cpair.diseased(xs[i]), cpair.healthy(xs[i])};
    out[i] = auc(pair, dir, s);
  });
  return out;
}

LikelihoodRatioCheck affinity_lr_identity_check(const TestPair& pair, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("likelihood-ratio check needs n >= 2");
  const auto ys = sample(pair.healthy, n, seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double y : ys) {
    const double fd = eval_density(pair.diseased, y);
    const double fnd = eval_density(pair.healthy, y);
    double r = 0.0;
    if (fnd > 0.0) {
      r = std::sqrt(fd / fnd);
    } else if (fd > 0.0) {
      throw NumericError("f_D is positive where f_Dbar vanishes; ratio undefined");
    }
    sum += r;
    sum_sq += r * r;
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
  return {mean, std::sqrt(var / dn), affinity(pair)};
}

}  // namespace dxa
