#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dxa/density.hpp"
#include "dxa/parallel.hpp"
#include "dxa/quadrature.hpp"

namespace dxa {

enum class TestDirection { upper_tailed, lower_tailed };

struct TestPair {
  Density diseased;
  Density healthy;
};

// Densities of each arm as functions of a covariate.
struct ConditionalTestPair {
  std::function<Density(double)> diseased;
  std::function<Density(double)> healthy;
  Interval domain{-1.0, 1.0};
};

using DensityFn = std::function<double(double)>;

QuadratureSpec default_spec(const TestPair& pair, QuadratureSettings s = {});
std::vector<double> breakpoints(const TestPair& pair);

// Hellinger affinity: integral of sqrt(f_D f_Dbar).
double affinity(const DensityFn& f_d, const DensityFn& f_nd, const QuadratureSpec& spec,
                std::span<const double> breaks = {});
double affinity(const TestPair& pair, const QuadratureSpec& spec);
double affinity(const TestPair& pair, QuadratureSettings s = {});

// The curve c(y) = sqrt(f_D(y) f_Dbar(y)) whose area is the affinity.
double affinity_curve(const TestPair& pair, double y);

double affinity_binormal(const NormalParams& d, const NormalParams& nd);
double affinity_bibeta(const BetaParams& d, const BetaParams& nd);
double affinity_biexponential(const ExponentialParams& d, const ExponentialParams& nd);

/// <f_D, f_Dbar> / (||f_D|| ||f_Dbar||). Throws DomainError when a squared
/// norm keeps moving as the grid is refined (density not square-integrable).
double affinity_normalized(const TestPair& pair, const QuadratureSpec& spec);
double affinity_normalized(const TestPair& pair, QuadratureSettings s = {});

// upper_tailed: P(Y_D > Y_Dbar); lower_tailed: P(Y_D < Y_Dbar). The CDF of
// the reference arm is accumulated on the quadrature nodes.
double auc(const DensityFn& f_d, const DensityFn& f_nd, TestDirection dir, const QuadratureSpec& spec,
           std::span<const double> breaks = {});
double auc(const TestPair& pair, TestDirection dir, const QuadratureSpec& spec);
double auc(const TestPair& pair, TestDirection dir, QuadratureSettings s = {});

// Closed-form upper-tailed AUC for two normal mixtures.
double auc_mixture_normal(const NormalMixture& d, const NormalMixture& nd);
double auc_mixture_normal(const MixtureModel& d, const MixtureModel& nd);

struct YoudenResult {
  double yi = 0.0;
  double cutoff = 0.0;      // smallest maximizing cutoff
  double cutoff_end = 0.0;  // end of the contiguous maximizing run (== cutoff without a plateau)
};

YoudenResult youden(const TestPair& pair, TestDirection dir, int grid_size = 10000);
YoudenResult youden_abs(const TestPair& pair, int grid_size = 10000);

double ovl(const TestPair& pair, const QuadratureSpec& spec);
double ovl(const TestPair& pair, QuadratureSettings s = {});

std::vector<double> affinity_conditional(const ConditionalTestPair& cpair, std::span<const double> xs,
                                         QuadratureSettings s = {}, Execution exec = Execution::parallel);
std::vector<double> auc_conditional(const ConditionalTestPair& cpair, std::span<const double> xs,
                                    TestDirection dir, QuadratureSettings s = {},
                                    Execution exec = Execution::parallel);

struct LikelihoodRatioCheck {
  double mc_estimate = 0.0;
  double mc_std_error = 0.0;
  double quad_value = 0.0;
};

/// Monte Carlo mean of sqrt(f_D(Y) / f_Dbar(Y)) with Y ~ f_Dbar, against the
/// quadrature affinity.
LikelihoodRatioCheck affinity_lr_identity_check(const TestPair& pair, std::size_t n, std::uint64_t seed);

}  // namespace dxa
