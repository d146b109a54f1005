#pragma once

// Joint-distribution test of the Gibbs sampler: alternate "simulate data given
// parameters" with one sweep, so the parameter marginals must stay at their
// prior. Moments are compared against prior values in batch-means SE units.

#include <cmath>
#include <string>
#include <vector>

#include "dxa/dpm.hpp"

namespace geweke {

struct Moment {
  std::string name;
  double expected;
  double estimate;
  double std_error;

  double z() const { return std::abs(estimate - expected) / std_error; }
};

inline double batch_se(const std::vector<double>& xs, int batches) {
  const std::size_t len = xs.size() / static_cast<std::size_t>(batches);
  std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
  double grand = 0.0;
  for (int b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) means[static_cast<std::size_t>(b)] += xs[b * len + i];
    means[static_cast<std::size_t>(b)] /= static_cast<double>(len);
    grand += means[static_cast<std::size_t>(b)];
  }
  grand /= batches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return std::sqrt(ss / (batches - 1) / batches);
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double v : xs) s += v;
  return s / static_cast<double>(xs.size());
}

/// Intercept-only model with n observations under the default hyperpriors
/// (p = 1: beta0 ~ N(0, 1), Sigma0 ~ IW(3, 1) so 1/Sigma0 ~ chi-square(3),
/// cluster precision ~ Gamma(1, rate ig_scale)).
inline std::vector<Moment> run(int n, int burn_in, int iterations, std::uint64_t seed, int batches = 50) {
  using namespace dxa;
  const auto hyper = BaseMeasureHyper::defaults(1);
  Rng rng(seed);
  RegressionData data;
  data.p = 1;
  data.design.assign(static_cast<std::size_t>(n), 1.0);
  data.z.assign(static_cast<std::size_t>(n), 0.0);
  for (double& z : data.z) z = rng.normal();
  DpmState s = initial_state(data, hyper, rng);

  std::vector<double> b0, b0sq, prec, precsq, k, k1, tau;
  for (int it = 0; it < burn_in + iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      const auto& c = s.clusters[static_cast<std::size_t>(s.assignments[static_cast<std::size_t>(i)])];
      data.z[static_cast<std::size_t>(i)] = c.beta[0] + std::sqrt(c.sigma2) * rng.normal();
    }
    neal8_sweep(s, data, 3, rng);
    if (it < burn_in) continue;
    const double beta0 = s.hyper.beta0(0);
    const double p0 = 1.0 / s.hyper.Sigma0(0, 0);
    b0.push_back(beta0);
    b0sq.push_back(beta0 * beta0);
    prec.push_back(p0);
    precsq.push_back(p0 * p0);
    k.push_back(static_cast<double>(s.occupied()));
    k1.push_back(s.occupied() == 1 ? 1.0 : 0.0);
    tau.push_back(1.0 / s.clusters[static_cast<std::size_t>(s.assignments[0])].sigma2);
  }

  // Chinese restaurant process with alpha = 1: E[K] = H_n, P(K = 1) = 1/n.
  double harmonic = 0.0;
  for (int i = 1; i <= n; ++i) harmonic += 1.0 / i;
  auto moment = [&](const char* name, double expected, const std::vector<double>& xs) {
    return Moment{name, expected, mean(xs), batch_se(xs, batches)};
  };
  return {moment("E[beta0]", 0.0, b0),
          moment("E[beta0^2]", 1.0, b0sq),
          moment("E[1/Sigma0]", 3.0, prec),
          moment("E[(1/Sigma0)^2]", 15.0, precsq),
          moment("E[K]", harmonic, k),
          moment("P(K=1)", 1.0 / n, k1),
          moment("E[1/sigma2]", hyper.ig_shape / hyper.ig_scale, tau)};
}

}  // namespace geweke
