#include <doctest.h>

#include <cmath>

#include "dxa/dpm.hpp"
#include "dxa/errors.hpp"
#include "dxa/posterior.hpp"
#include "oracle.hpp"

using namespace dxa;

namespace {

// A draw holding a single normal component on the original scale.
PosteriorPredictive point_draw(double mu, double sd) {
  PosteriorPredictive d;
  d.weights = {1.0};
  d.betas = {mu};
  d.sigmas = {sd};
  d.n_occupied = 1;
  d.n_obs = 100;
  return d;
}

PosteriorPredictive two_component_draw(double w, double m1, double s1, double m2, double s2) {
  PosteriorPredictive d;
  d.weights = {w, 1 - w};
  d.betas = {m1, m2};
  d.sigmas = {s1, s2};
  d.n_occupied = 2;
  d.n_obs = 100;
  return d;
}

std::vector<PosteriorPredictive> jittered(double mu, double sd, int n, std::uint64_t seed) {
  Rng r(seed);
  std::vector<PosteriorPredictive> out;
  for (int i = 0; i < n; ++i) out.push_back(point_draw(mu + 0.1 * r.normal(), sd * (1 + 0.05 * r.normal())));
  return out;
}

McmcConfig short_chain(std::uint64_t seed) {
  McmcConfig c;
  c.burn_in = 100;
  c.thin = 2;
  c.n_keep = 60;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("posterior") {
  TEST_CASE("mixture functionals agree with closed forms") {
    const NormalMixture d{{1.0}, {2.0}, {1.0}}, nd{{1.0}, {0.0}, {1.0}};
    CHECK(std::abs(mixture_affinity(d, nd) - std::exp(-0.5)) < 1e-10);
    CHECK(std::abs(mixture_ovl(d, nd) - 2 * oracle::Phi(-1)) < 1e-8);
    const NormalMixture m{{0.3, 0.7}, {-1, 1.5}, {0.4, 0.9}};
    const double want = oracle::integrate([&](double y) { return std::sqrt(m.eval(y) * nd.eval(y)); }, -15, 15);
    CHECK(std::abs(mixture_affinity(m, nd) - want) < 1e-9);
  }

  TEST_CASE("summaries of known draws") {
    const std::vector<PosteriorPredictive> d{point_draw(2, 1), point_draw(3, 1)};
    const std::vector<PosteriorPredictive> nd{point_draw(0, 1), point_draw(0, 1)};
    const auto k = posterior_affinity(d, nd);
    REQUIRE(k.draws.size() == 2);
    CHECK(k.grid.empty());
    CHECK(std::abs(k.draws[0][0] - std::exp(-0.5)) < 1e-10);
    CHECK(std::abs(k.draws[1][0] - std::exp(-9.0 / 8.0)) < 1e-10);
    CHECK(k.mean[0] == doctest::Approx(0.5 * (std::exp(-0.5) + std::exp(-9.0 / 8.0))));
    const auto a = posterior_auc(d, nd, TestDirection::upper_tailed);
    CHECK(std::abs(a.draws[0][0] - oracle::Phi(std::sqrt(2.0))) < 1e-14);
    CHECK(a.lo95[0] <= a.mean[0]);
    CHECK(a.mean[0] <= a.hi95[0]);
  }

  TEST_CASE("quantiles interpolate order statistics") {
    CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
    CHECK(quantile({0, 10}, 0.25) == 2.5);
    CHECK(quantile({5}, 0.975) == 5.0);
    CHECK_THROWS_AS(quantile({}, 0.5), DomainError);
  }

  TEST_CASE("serial and parallel kernels agree bitwise") {
    const auto d = jittered(1.0, 1.2, 40, 1);
    const auto nd = jittered(-0.5, 0.8, 40, 2);
    CHECK(posterior_affinity(d, nd, {}, Execution::serial) == posterior_affinity(d, nd, {}, Execution::parallel));
    CHECK(posterior_ovl(d, nd, {}, {}, Execution::serial) == posterior_ovl(d, nd, {}, {}, Execution::parallel));
    CHECK(posterior_youden(d, nd, TestDirection::upper_tailed, {}, 500, Execution::serial) ==
          posterior_youden(d, nd, TestDirection::upper_tailed, {}, 500, Execution::parallel));
    CHECK(posterior_auc(d, nd, TestDirection::lower_tailed, {}, Execution::serial) ==
          posterior_auc(d, nd, TestDirection::lower_tailed, {}, Execution::parallel));
  }

  TEST_CASE("upper and lower AUC are complements, and swapping arms swaps them") {
    std::vector<PosteriorPredictive> d, nd;
    for (int i = 0; i < 10; ++i) {
      d.push_back(two_component_draw(0.3 + 0.04 * i, -1, 0.5, 2, 1));
      nd.push_back(two_component_draw(0.5, 0, 1, 0.5 + 0.1 * i, 0.3));
    }
    const auto up = posterior_auc(d, nd, TestDirection::upper_tailed);
    const auto lo = posterior_auc(d, nd, TestDirection::lower_tailed);
    const auto swapped = posterior_auc(nd, d, TestDirection::upper_tailed);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(up.draws[i][0] + lo.draws[i][0] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(swapped.draws[i][0] == doctest::Approx(lo.draws[i][0]).epsilon(1e-12));
    }
    const auto k = posterior_affinity(d, nd);
    const auto ks = posterior_affinity(nd, d);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(k.draws[i][0] - ks.draws[i][0]) < 1e-12);
  }

  TEST_CASE("OVL never exceeds affinity per draw") {
    const auto d = jittered(0.5, 1.0, 30, 3);
    const auto nd = jittered(0.0, 2.0, 30, 4);
    const auto k = posterior_affinity(d, nd);
    const auto o = posterior_ovl(d, nd);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(o.draws[i][0] <= k.draws[i][0] + 1e-12);
  }

  TEST_CASE("fits of the same sample have affinity near one") {
    Rng r(6);
    std::vector<double> ys(300);
    for (double& y : ys) y = r.normal(0, 1);
    const auto a = fit_dpm(ys, short_chain(1));
    const auto b = fit_dpm(ys, short_chain(2));
    CHECK(posterior_affinity(a.draws, b.draws).mean[0] > 0.95);
  }

  TEST_CASE("fits of separated samples have affinity near zero") {
    Rng r(7);
    std::vector<double> y0(200), y8(200);
    for (double& y : y0) y = r.normal(0, 1);
    for (double& y : y8) y = r.normal(8, 1);
    const auto a = fit_dpm(y8, short_chain(3));
    const auto b = fit_dpm(y0, short_chain(4));
    const auto k = posterior_affinity(a.draws, b.draws);
    CHECK(k.mean[0] < 0.05);
    CHECK(posterior_auc(a.draws, b.draws, TestDirection::upper_tailed).mean[0] > 0.99);
  }

  TEST_CASE("conditional summaries keep the covariate grid") {
    Rng r(9);
    std::vector<double> ys, xs;
    for (int i = 0; i < 200; ++i) {
      const double x = 2 * r.uniform() - 1;
      xs.push_back(x);
      ys.push_back(r.normal(x, 0.5));
    }
    const auto f = fit_ddp(ys, xs, short_chain(5));
    const std::vector<double> one{0.25};
    const auto k = posterior_affinity_conditional(f.draws, f.draws, one);
    CHECK(k.grid == one);
    REQUIRE(k.draws.front().size() == 1);
    // G0 predictive components outside the integration hull are dropped.
    CHECK(k.mean[0] == doctest::Approx(1.0).epsilon(1e-4));
    const std::vector<double> g{-1, 0, 1};
    const auto a = posterior_auc(f.draws, f.draws, TestDirection::upper_tailed, g);
    for (double v : a.mean) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(posterior_affinity_conditional(f.draws, f.draws, g, {}, Execution::serial) ==
          posterior_affinity_conditional(f.draws, f.draws, g, {}, Execution::parallel));
  }

  TEST_CASE("argument errors") {
    const auto d = jittered(0, 1, 5, 1);
    const auto nd = jittered(0, 1, 4, 2);
    CHECK_THROWS_AS(posterior_affinity(d, nd), DomainError);
    CHECK_THROWS_AS(posterior_affinity(std::vector<PosteriorPredictive>{}, std::vector<PosteriorPredictive>{}),
                    DomainError);
    const std::vector<double> outside{1.5};
    CHECK_THROWS_AS(posterior_auc(d, d, TestDirection::upper_tailed, outside), DomainError);
    CHECK_THROWS_AS(posterior_affinity_conditional(d, d, std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(measure_from_string("gini"), DomainError);
    CHECK(measure_from_string(to_string(Measure::auc_lower)) == Measure::auc_lower);
  }

  TEST_CASE("posterior mean density integrates to one") {
    const auto d = jittered(1, 0.7, 20, 8);
    std::vector<double> g;
    for (int k = 0; k <= 2000; ++k) g.push_back(-6 + 14.0 * k / 2000);
    const auto f = posterior_mean_density(d, g);
    double total = 0.0;
    for (std::size_t k = 1; k < g.size(); ++k) total += 0.5 * (g[k] - g[k - 1]) * (f[k] + f[k - 1]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    std::vector<double> unsorted{1, 0};
    CHECK_THROWS_AS(posterior_mean_density(d, unsorted), DomainError);
  }
}
