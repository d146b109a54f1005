#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dxa/bspline.hpp"
#include "dxa/posterior.hpp"
#include "dxa/rng.hpp"
#include "dxa/transforms.hpp"

namespace dxa {

/// Base measure G0 = N(beta0, Sigma0) x IG(ig_shape, ig_scale) and the
/// hyperpriors beta0 ~ N(prior_mean, prior_cov), Sigma0 ~ IW(iwish_df, iwish_scale).
///
/// The inverse-gamma density is proportional to s^{-shape-1} exp(-ig_scale / s).
/// The default ig_scale of 1/50 puts the prior mode of the within-cluster
/// variance at 0.01 on standardized data; literal() selects ig_scale = 50.
/// The inverse-Wishart mean is iwish_scale / (iwish_df - p - 1).
struct BaseMeasureHyper {
  Eigen::VectorXd beta0;
  Eigen::MatrixXd Sigma0;
  double ig_shape = 1.0;
  double ig_scale = 1.0 / 50.0;
  Eigen::VectorXd prior_mean;
  Eigen::MatrixXd prior_cov;
  double iwish_df = 3.0;
  Eigen::MatrixXd iwish_scale;
  bool update_hyper = true;

  int dim() const { return static_cast<int>(beta0.size()); }

  static BaseMeasureHyper defaults(int p);
  // IG(shape 1, 50) read with 50 in the exponent, and IW degrees of freedom 1.
  static BaseMeasureHyper literal(int p);
};

void validate(const BaseMeasureHyper& hyper);

struct McmcConfig {
  int burn_in = 2000;
  int thin = 40;
  int n_keep = 300;
  int m_aux = 3;
  int n_predictive = 50;  // fresh G0 draws per kept iterate for the predictive component
  std::uint64_t seed = 1;

  int total_iterations() const { return burn_in + thin * n_keep; }
};

void validate(const McmcConfig& cfg);

// Row-major design (n x p) and standardized responses.
struct RegressionData {
  int p = 1;
  std::vector<double> design;
  std::vector<double> z;

  std::size_t n() const { return z.size(); }
  const double* row(std::size_t i) const { return design.data() + i * static_cast<std::size_t>(p); }
};

struct Cluster {
  std::vector<double> beta;
  double sigma2 = 1.0;
  int size = 0;
};

struct DpmState {
  std::vector<int> assignments;
  std::vector<Cluster> clusters;
  BaseMeasureHyper hyper;
  double alpha = 1.0;

  std::size_t occupied() const { return clusters.size(); }
};

void check_state(const DpmState& state, const RegressionData& data);

// All observations in one cluster; its parameters drawn from the conjugate
// conditionals given that assignment.
DpmState initial_state(const RegressionData& data, BaseMeasureHyper hyper, Rng& rng, double alpha = 1.0);

/// One Gibbs sweep of Neal's Algorithm 8: reassignment with m_aux auxiliary
/// components from G0, conjugate refresh of (beta, sigma2) per cluster, then
/// of (beta0, Sigma0) when hyper.update_hyper is set.
void neal8_sweep(DpmState& state, const RegressionData& data, int m_aux, Rng& rng);

// Predictive mixture at the current state on the standardized scale.
PosteriorPredictive predictive_from_state(const DpmState& state, std::size_t n_obs, int n_predictive,
                                          const Standardization& standardization, Rng& rng);

struct PosteriorFit {
  std::vector<PosteriorPredictive> draws;
  std::vector<int> occupied;  // occupied clusters at each kept iterate
  Standardization standardization;
};

PosteriorFit fit_dpm(std::span<const double> ys, const McmcConfig& cfg, BaseMeasureHyper hyper);
PosteriorFit fit_dpm(std::span<const double> ys, const McmcConfig& cfg);

PosteriorFit fit_ddp(std::span<const double> ys, std::span<const double> xs, const McmcConfig& cfg,
                     BaseMeasureHyper hyper, const BSplineBasis& basis);
PosteriorFit fit_ddp(std::span<const double> ys, std::span<const double> xs, const McmcConfig& cfg,
                     const BSplineBasis& basis = BSplineBasis{});

// Samplers shared with the prior-simulation tests.
Eigen::VectorXd draw_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov, Rng& rng);
Eigen::MatrixXd draw_inverse_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng);
double draw_inverse_gamma(double shape, double scale, Rng& rng);

}  // namespace dxa
