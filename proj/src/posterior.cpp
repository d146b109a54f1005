#include "dxa/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

void check_paired(std::span<const PosteriorPredictive> d, std::span<const PosteriorPredictive> nd) {
  if (d.size() != nd.size()) throw DomainError("diseased and non-diseased arms have different numbers of draws");
  if (d.empty()) throw DomainError("no posterior draws");
}

void check_grid(std::span<const double> xgrid) {
  for (double x : xgrid)
    if (!(x >= -1.0 && x <= 1.0)) throw DomainError("covariate grid must lie in [-1, 1]");
}

double clamp_unit(double v) {
  if (std::isnan(v)) throw NumericError("posterior functional evaluated to NaN");
  if (v < 0.0 && v > -1e-9) return 0.0;
  if (v > 1.0 && v <= 1.0 + 1e-9) return 1.0;
  if (v < 0.0 || v > 1.0) throw NumericError("posterior functional left [0, 1]");
  return v;
}

struct MixtureGrid {
  QuadratureGrid grid;
  std::vector<double> fd;
  std::vector<double> fnd;
};

MixtureGrid tabulate(const NormalMixture& d, const NormalMixture& nd, QuadratureSettings s, double wd, double wnd) {
  const auto bd = d.bounds(wd);
  const auto bnd = nd.bounds(wnd);
  const auto spec = QuadratureSpec::over(std::min(bd.lo, bnd.lo), std::max(bd.hi, bnd.hi), s);
  MixtureGrid t{make_grid(spec), {}, {}};
  t.fd.assign(t.grid.nodes.size(), 0.0);
  t.fnd.assign(t.grid.nodes.size(), 0.0);
  d.accumulate(t.grid.nodes, t.fd);
  nd.accumulate(t.grid.nodes, t.fnd);
  return t;
}

// Evaluates fn(draw, column) for every draw and grid column. Draws are
// independent, so the parallel path distributes rows across threads.
template <class Fn>
std::vector<std::vector<double>> per_draw(std::size_t n_draws, std::size_t n_cols, Execution exec, Fn&& fn) {
  std::vector<std::vector<double>> out(n_draws, std::vector<double>(n_cols));
  for_each_index(n_draws, exec, [&](std::size_t r) {
    for (std::size_t c = 0; c < n_cols; ++c) out[r][c] = fn(r, c);
  });
  return out;
}

std::vector<double> columns_or_scalar(std::span<const double> xgrid) {
  return xgrid.empty() ? std::vector<double>{0.0} : std::vector<double>(xgrid.begin(), xgrid.end());
}

}  // namespace

NormalMixture PosteriorPredictive::at(double x) const {
  NormalMixture m;
  const std::size_t k = size();
  m.weights = weights;
  m.means.resize(k);
  m.sds.resize(k);
  std::vector<double> row(static_cast<std::size_t>(p), 1.0);
  if (basis) {
    if (basis->dimension() != p) throw DomainError("predictive basis dimension mismatch");
    basis->evaluate(x, row.data());
  }
  const double loc = standardization.location;
  const double scale = standardization.scale;
  for (std::size_t j = 0; j < k; ++j) {
    double mu = 0.0;
    for (int c = 0; c < p; ++c) mu += row[static_cast<std::size_t>(c)] * betas[j * static_cast<std::size_t>(p) + c];
    m.means[j] = loc + scale * mu;
    m.sds[j] = scale * sigmas[j];
  }
  return m;
}

std::string to_string(Measure m) {
  switch (m) {
    case Measure::kappa: return "kappa";
    case Measure::auc_upper: return "auc_upper";
    case Measure::auc_lower: return "auc_lower";
    case Measure::yi: return "yi";
    case Measure::ovl: return "ovl";
  }
  return "unknown";
}

Measure measure_from_string(const std::string& s) {
  for (Measure m : {Measure::kappa, Measure::auc_upper, Measure::auc_lower, Measure::yi, Measure::ovl})
    if (to_string(m) == s) return m;
  throw DomainError("unknown measure '" + s + "'");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return values[lo] + t * (values[hi] - values[lo]);
}

AccuracySummary summarize(Measure m, std::vector<double> grid, std::vector<std::vector<double>> draws) {
  if (draws.empty()) throw DomainError("cannot summarize zero draws");
  const std::size_t cols = draws.front().size();
  AccuracySummary s;
  s.measure = m;
  s.grid = std::move(grid);
  s.mean.resize(cols);
  s.lo95.resize(cols);
  s.hi95.resize(cols);
  std::vector<double> column(draws.size());
  for (std::size_t c = 0; c < cols; ++c) {
    double total = 0.0;
    for (std::size_t r = 0; r < draws.size(); ++r) {
      column[r] = draws[r][c];
      total += column[r];
    }
    s.mean[c] = total / static_cast<double>(draws.size());
    s.lo95[c] = std::min(quantile(column, 0.025), s.mean[c]);
    s.hi95[c] = std::max(quantile(column, 0.975), s.mean[c]);
  }
  s.draws = std::move(draws);
  return s;
}

double mixture_affinity(const NormalMixture& d, const NormalMixture& nd, QuadratureSettings s, double wd,
                        double wnd) {
  const auto t = tabulate(d, nd, s, wd, wnd);
  double total = 0.0;
  for (std::size_t k = 0; k < t.fd.size(); ++k) total += t.grid.weights[k] * std::sqrt(t.fd[k] * t.fnd[k]);
  return clamp_unit(total);
}

double mixture_ovl(const NormalMixture& d, const NormalMixture& nd, QuadratureSettings s, double wd, double wnd) {
  const auto t = tabulate(d, nd, s, wd, wnd);
  double total = 0.0;
  for (std::size_t k = 0; k < t.fd.size(); ++k) total += t.grid.weights[k] * std::min(t.fd[k], t.fnd[k]);
  return clamp_unit(total);
}

AccuracySummary posterior_affinity(std::span<const PosteriorPredictive> d, std::span<const PosteriorPredictive> nd,
                                   QuadratureSettings s, Execution exec) {
  check_paired(d, nd);
  auto draws = per_draw(d.size(), 1, exec, [&](std::size_t r, std::size_t) {
    return mixture_affinity(d[r].at(), nd[r].at(), s, d[r].core_weight_threshold(), nd[r].core_weight_threshold());
  });
  return summarize(Measure::kappa, {}, std::move(draws));
}

AccuracySummary posterior_affinity_conditional(std::span<const PosteriorPredictive> d,
                                               std::span<const PosteriorPredictive> nd,
                                               std::span<const double> xgrid, QuadratureSettings s, Execution exec) {
  check_paired(d, nd);
  check_grid(xgrid);
  if (xgrid.empty()) throw DomainError("conditional summary needs a nonempty covariate grid");
  auto draws = per_draw(d.size(), xgrid.size(), exec, [&](std::size_t r, std::size_t c) {
    return mixture_affinity(d[r].at(xgrid[c]), nd[r].at(xgrid[c]), s, d[r].core_weight_threshold(),
                            nd[r].core_weight_threshold());
  });
  return summarize(Measure::kappa, {xgrid.begin(), xgrid.end()}, std::move(draws));
}

AccuracySummary posterior_auc(std::span<const PosteriorPredictive> d, std::span<const PosteriorPredictive> nd,
                              TestDirection dir, std::span<const double> xgrid, Execution exec) {
  check_paired(d, nd);
  check_grid(xgrid);
  const auto cols = columns_or_scalar(xgrid);
  auto draws = per_draw(d.size(), cols.size(), exec, [&](std::size_t r, std::size_t c) {
    const auto md = d[r].at(cols[c]);
    const auto mnd = nd[r].at(cols[c]);
    return dir == TestDirection::upper_tailed ? auc_mixture_normal(md, mnd) : auc_mixture_normal(mnd, md);
  });
  const Measure tag = dir == TestDirection::upper_tailed ? Measure::auc_upper : Measure::auc_lower;
  return summarize(tag, {xgrid.begin(), xgrid.end()}, std::move(draws));
}

AccuracySummary posterior_ovl(std::span<const PosteriorPredictive> d, std::span<const PosteriorPredictive> nd,
                              std::span<const double> xgrid, QuadratureSettings s, Execution exec) {
  check_paired(d, nd);
  check_grid(xgrid);
  const auto cols = columns_or_scalar(xgrid);
  auto draws = per_draw(d.size(), cols.size(), exec, [&](std::size_t r, std::size_t c) {
    return mixture_ovl(d[r].at(cols[c]), nd[r].at(cols[c]), s, d[r].core_weight_threshold(),
                       nd[r].core_weight_threshold());
  });
  return summarize(Measure::ovl, {xgrid.begin(), xgrid.end()}, std::move(draws));
}

AccuracySummary posterior_youden(std::span<const PosteriorPredictive> d, std::span<const PosteriorPredictive> nd,
                                 TestDirection dir, std::span<const double> xgrid, int grid_size, Execution exec) {
  check_paired(d, nd);
  check_grid(xgrid);
  if (grid_size < 100) throw DomainError("Youden grid needs at least 100 cutoffs");
  const auto cols = columns_or_scalar(xgrid);
  const double sign = dir == TestDirection::upper_tailed ? 1.0 : -1.0;
  auto draws = per_draw(d.size(), cols.size(), exec, [&](std::size_t r, std::size_t c) {
    const auto md = d[r].at(cols[c]);
    const auto mnd = nd[r].at(cols[c]);
    const auto bd = md.bounds(d[r].core_weight_threshold());
    const auto bnd = mnd.bounds(nd[r].core_weight_threshold());
    const double lo = std::min(bd.lo, bnd.lo);
    const double hi = std::max(bd.hi, bnd.hi);
    double best = 0.0;
    for (int k = 0; k < grid_size; ++k) {
      const double y = lo + (hi - lo) * k / (grid_size - 1);
      best = std::max(best, sign * (mnd.cdf(y) - md.cdf(y)));
    }
    return std::min(best, 1.0);
  });
  return summarize(Measure::yi, {xgrid.begin(), xgrid.end()}, std::move(draws));
}

std::vector<double> posterior_mean_density(std::span<const PosteriorPredictive> draws, std::span<const double> ys,
                                           double x) {
  if (draws.empty()) throw DomainError("no posterior draws");
  std::vector<double> out(ys.size(), 0.0);
  std::vector<double> sorted(ys.begin(), ys.end());
  if (!std::is_sorted(sorted.begin(), sorted.end())) throw DomainError("density grid must be sorted");
  for (const auto& d : draws) d.at(x).accumulate(sorted, out);
  for (double& v : out) v /= static_cast<double>(draws.size());
  return out;
}

}  // namespace dxa
