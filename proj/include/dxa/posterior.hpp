#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dxa/bspline.hpp"
#include "dxa/density.hpp"
#include "dxa/measures.hpp"
#include "dxa/parallel.hpp"
#include "dxa/transforms.hpp"

namespace dxa {

/// Posterior predictive density of one MCMC iterate.
///
/// Components live on the standardized scale: occupied clusters carry weight
/// n_j / (n + alpha), and fresh G0 draws share alpha / (n + alpha). For
/// conditional fits the component mean at covariate x is basis(x) . beta.
struct PosteriorPredictive {
  int p = 1;
  std::vector<double> weights;
  std::vector<double> betas;  // p values per component
  std::vector<double> sigmas;
  std::size_t n_occupied = 0;
  std::size_t n_obs = 0;
  double alpha = 1.0;
  Standardization standardization;
  std::optional<BSplineBasis> basis;

  std::size_t size() const { return weights.size(); }

  // Original-scale mixture at covariate x in [-1, 1] (ignored when unconditional).
  NormalMixture at(double x = 0.0) const;

  // Weight separating occupied clusters from the G0 predictive draws.
  double core_weight_threshold() const { return 0.5 / (static_cast<double>(n_obs) + alpha); }
};

enum class Measure { kappa, auc_upper, auc_lower, yi, ovl };

std::string to_string(Measure m);
Measure measure_from_string(const std::string& s);

/// Posterior draws of a measure (rows: kept iterates, columns: grid points)
/// with pointwise mean and equal-tailed 95% bands. Scalar summaries have an
/// empty grid and one column.
struct AccuracySummary {
  Measure measure = Measure::kappa;
  std::vector<double> grid;
  std::vector<std::vector<double>> draws;
  std::vector<double> mean;
  std::vector<double> lo95;
  std::vector<double> hi95;

  bool operator==(const AccuracySummary&) const = default;
};

AccuracySummary summarize(Measure m, std::vector<double> grid, std::vector<std::vector<double>> draws);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

/// Affinity between two normal mixtures on a Simpson grid spanning the
/// components that carry at least min_weight in either arm.
double mixture_affinity(const NormalMixture& d, const NormalMixture& nd, QuadratureSettings s = {},
                        double min_weight_d = 0.0, double min_weight_nd = 0.0);
double mixture_ovl(const NormalMixture& d, const NormalMixture& nd, QuadratureSettings s = {},
                   double min_weight_d = 0.0, double min_weight_nd = 0.0);

AccuracySummary posterior_affinity(std::span<const PosteriorPredictive> d_draws,
                                   std::span<const PosteriorPredictive> nd_draws, QuadratureSettings s = {},
                                   Execution exec = Execution::parallel);

AccuracySummary posterior_affinity_conditional(std::span<const PosteriorPredictive> d_draws,
                                               std::span<const PosteriorPredictive> nd_draws,
                                               std::span<const double> xgrid, QuadratureSettings s = {},
                                               Execution exec = Execution::parallel);

// Closed form per draw; conditional when xgrid is nonempty.
AccuracySummary posterior_auc(std::span<const PosteriorPredictive> d_draws,
                              std::span<const PosteriorPredictive> nd_draws, TestDirection dir,
                              std::span<const double> xgrid = {}, Execution exec = Execution::parallel);

AccuracySummary posterior_ovl(std::span<const PosteriorPredictive> d_draws,
                              std::span<const PosteriorPredictive> nd_draws, std::span<const double> xgrid = {},
                              QuadratureSettings s = {}, Execution exec = Execution::parallel);

AccuracySummary posterior_youden(std::span<const PosteriorPredictive> d_draws,
                                 std::span<const PosteriorPredictive> nd_draws, TestDirection dir,
                                 std::span<const double> xgrid = {}, int grid_size = 1000,
                                 Execution exec = Execution::parallel);

// Posterior mean density over the kept draws at covariate x.
std::vector<double> posterior_mean_density(std::span<const PosteriorPredictive> draws,
                                           std::span<const double> ys, double x = 0.0);

}  // namespace dxa
