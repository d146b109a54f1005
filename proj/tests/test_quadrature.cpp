#include <doctest.h>

#include <cmath>

#include "dxa/errors.hpp"
#include "dxa/quadrature.hpp"
#include "oracle.hpp"

using namespace dxa;

TEST_SUITE("quadrature") {
  TEST_CASE("normal density integrates to one") {
    const double v = integrate([](double y) { return oracle::phi(y, 0, 1); }, QuadratureSpec::over(-10, 10));
    CHECK(std::abs(v - 1.0) < 1e-10);
  }

  TEST_CASE("mean of N(2, 1)") {
    const double v = integrate([](double y) { return y * oracle::phi(y, 2, 1); }, QuadratureSpec::over(-10, 14));
    CHECK(std::abs(v - 2.0) < 1e-8);
  }

  TEST_CASE("binormal affinity integral") {
    const double v = integrate([](double y) { return std::sqrt(oracle::phi(y, 2, 1) * oracle::phi(y, 0, 1)); },
                               QuadratureSpec::over(-12, 14));
    CHECK(std::abs(v - std::exp(-0.5)) < 1e-10);
  }

  TEST_CASE("polynomial times Gaussian integrals at the default spec") {
    // 20 integrands y^k phi(y | mu, sd) with closed-form moments.
    int checked = 0;
    for (int k = 0; k < 5; ++k) {
      for (auto [mu, sd] : {std::pair{0.0, 1.0}, std::pair{1.5, 0.5}, std::pair{-2.0, 2.0}, std::pair{0.3, 0.1}}) {
        const auto spec = QuadratureSpec::over(mu - 10 * sd, mu + 10 * sd);
        const double v = integrate([&](double y) { return std::pow(y, k) * oracle::phi(y, mu, sd); }, spec);
        CHECK(std::abs(v - oracle::normal_moment(k, mu, sd)) < 1e-8);
        ++checked;
      }
    }
    CHECK(checked == 20);
  }

  TEST_CASE("both rules agree on smooth integrands") {
    QuadratureSpec gl = QuadratureSpec::over(-8, 8);
    gl.rule = QuadratureRule::gauss_legendre;
    const auto f = [](double y) { return std::cos(y) * oracle::phi(y, 0.5, 1.3); };
    CHECK(std::abs(integrate(f, gl) - integrate(f, QuadratureSpec::over(-8, 8))) < 1e-10);
  }

  TEST_CASE("jumps on breakpoints are integrated exactly") {
    const auto step = [](double y) { return y < 0.3 ? 1.0 : (y <= 0.7 ? 3.0 : 0.5); };
    const std::vector<double> breaks{0.3, 0.7};
    for (auto rule : {QuadratureRule::composite_simpson, QuadratureRule::gauss_legendre}) {
      QuadratureSpec s = QuadratureSpec::over(0, 1);
      s.rule = rule;
      CHECK(std::abs(integrate(step, s, breaks) - (0.3 + 1.2 + 0.15)) < 1e-12);
    }
  }

  TEST_CASE("grid nodes are sorted and weights sum to the length") {
    for (auto rule : {QuadratureRule::composite_simpson, QuadratureRule::gauss_legendre}) {
      QuadratureSpec s{-3, 5, 101, rule};
      const std::vector<double> breaks{-1, 2};
      const auto g = make_grid(s, breaks);
      CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
      double w = 0;
      for (double v : g.weights) w += v;
      CHECK(std::abs(w - 8.0) < 1e-12);
    }
  }

  TEST_CASE("odd Simpson counts are rounded up to an even panel count") {
    const auto g = make_grid(QuadratureSpec{0, 1, 17, QuadratureRule::composite_simpson});
    CHECK(g.nodes.size() == 19);
    CHECK(g.uniform);
  }

  TEST_CASE("cumulative integral matches the normal CDF") {
    std::vector<double> nodes;
    for (int k = 0; k <= 400; ++k) nodes.push_back(-8 + 16.0 * k / 400);
    const auto F = cumulative_integral([](double y) { return oracle::phi(y, 0, 1); }, nodes);
    for (std::size_t k = 0; k < nodes.size(); ++k) CHECK(std::abs(F[k] - oracle::Phi(nodes[k])) < 1e-9);
  }

  TEST_CASE("invalid specs and non-finite integrands are errors") {
    CHECK_THROWS_AS(validate(QuadratureSpec{1, 0, 100}), DomainError);
    CHECK_THROWS_AS(validate(QuadratureSpec{0, 1, 8}), DomainError);
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, QuadratureSpec::over(0, 1)), NumericError);
  }
}
