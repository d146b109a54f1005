#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dxa/errors.hpp"
#include "dxa/scenario.hpp"
#include "oracle.hpp"

using namespace dxa;

namespace {

std::vector<double> grid21() {
  std::vector<double> g;
  for (int k = 0; k < 21; ++k) g.push_back(-1 + 0.1 * k);
  return g;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("scenario names round-trip") {
    for (auto id : {ScenarioId::U1, ScenarioId::U2, ScenarioId::C1, ScenarioId::C2, ScenarioId::C3,
                    ScenarioId::SEPTRAP})
      CHECK(scenario_from_string(to_string(id)) == id);
    CHECK_THROWS_AS(scenario_from_string("U9"), DomainError);
  }

  TEST_CASE("sub-setting counts and conditionality") {
    CHECK(make_scenario(ScenarioId::U1).settings.size() == 9);
    CHECK(make_scenario(ScenarioId::U2).settings.size() == 9);
    CHECK(make_scenario(ScenarioId::C1).settings.size() == 1);
    CHECK(make_scenario(ScenarioId::C3).conditional());
    CHECK_FALSE(make_scenario(ScenarioId::U2).conditional());
    CHECK(make_scenario(ScenarioId::U1).settings.front().label == "mu_D=0.8,sigma_D=0.8");
  }

  TEST_CASE("unimodal truths against the binormal oracle") {
    const auto u1 = make_scenario(ScenarioId::U1);
    const auto t = true_measures(u1.settings.front());
    CHECK(t.grid.empty());
    CHECK(std::abs(t.kappa[0] - 0.969233234476344) < 1e-12);  // exp(-1/32)
    for (const auto& s : u1.settings) {
      const auto tm = true_measures(s);
      const auto d = std::get<NormalParams>(s.diseased(0).variant());
      CHECK(std::abs(tm.kappa_closed[0] - oracle::binormal_kappa(d.mu, d.sigma, 0.4, 0.8)) < 1e-14);
      CHECK(std::abs(tm.auc_closed[0] - oracle::binormal_auc(d.mu, d.sigma, 0.4, 0.8)) < 1e-14);
      CHECK(std::abs(tm.kappa[0] - tm.kappa_closed[0]) < 1e-8);
      CHECK(std::abs(tm.auc[0] - tm.auc_closed[0]) < 1e-8);
    }
  }

  TEST_CASE("variance reading takes square roots") {
    const auto s = make_scenario(ScenarioId::U1, ScaleReading::variance).settings.front();
    const auto d = std::get<NormalParams>(s.diseased(0).variant());
    CHECK(d.sigma == std::sqrt(0.8));
  }

  TEST_CASE("bimodal truths: mixture AUC closed form and quadrature agree") {
    for (const auto& s : make_scenario(ScenarioId::U2).settings) {
      const auto t = true_measures(s);
      INFO(s.label);
      CHECK(std::isnan(t.kappa_closed[0]));
      CHECK(std::abs(t.auc[0] - t.auc_closed[0]) < 1e-8);
      const double direct = oracle::integrate_pieces(
          [&](double y) { return std::sqrt(s.diseased(0)(y) * s.healthy(0)(y)); }, {-6, 0, 3, 6, 12});
      CHECK(std::abs(t.kappa[0] - direct) < 1e-9);
    }
  }

  TEST_CASE("conditional truths") {
    const auto g = grid21();
    const auto c1 = true_measures(make_scenario(ScenarioId::C1).settings.front(), g);
    REQUIRE(c1.kappa.size() == 21);
    CHECK(std::abs(c1.auc[10] - 0.725746882249926) < 1e-8);  // Phi(0.6)
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double x = g[k];
      CHECK(std::abs(c1.kappa[k] - oracle::binormal_kappa(2 + 4 * x, 2, 0.5 + x, 1.5)) < 1e-8);
    }
    const auto c2 = true_measures(make_scenario(ScenarioId::C2).settings.front(), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double x = g[k];
      const double m = std::sin(std::numbers::pi * (x + 1));
      CHECK(std::abs(c2.kappa[k] - oracle::binormal_kappa(0.5 + x * x, 1, m, 0.5)) < 1e-8);
      CHECK(std::abs(c2.auc[k] - oracle::binormal_auc(0.5 + x * x, 1, m, 0.5)) < 1e-8);
    }
    const auto c3s = make_scenario(ScenarioId::C3).settings.front();
    const auto c3 = true_measures(c3s, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double x = g[k];
      const double w = 1 / (1 + std::exp(-x));
      const double sd = std::sqrt(0.2 + 0.5 * std::exp(x));
      const double m = std::sin(std::numbers::pi * x);
      auto fd = [&](double y) { return w * oracle::phi(y, x, 0.5) + (1 - w) * oracle::phi(y, x * x * x, 1); };
      const double kappa =
          oracle::integrate([&](double y) { return std::sqrt(fd(y) * oracle::phi(y, m, sd)); }, -15, 15);
      const double auc = w * oracle::binormal_auc(x, 0.5, m, sd) + (1 - w) * oracle::binormal_auc(x * x * x, 1, m, sd);
      CHECK(std::abs(c3.kappa[k] - kappa) < 1e-8);
      CHECK(std::abs(c3.auc[k] - auc) < 1e-8);
      CHECK(std::abs(c3.auc_closed[k] - auc) < 1e-12);
    }
    CHECK_THROWS_AS(true_measures(c3s), DomainError);
  }

  TEST_CASE("logistic weight") {
    for (int k = 0; k < 1000; ++k) {
      const double x = -1 + 2.0 * k / 999;
      CHECK(std::abs(c3_weight(x) - 1 / (1 + std::exp(-x))) < 1e-15);
      CHECK(std::abs(c3_weight(x) + c3_weight(-x) - 1) < 1e-15);
    }
    CHECK(c3_weight(0) == 0.5);
  }

  TEST_CASE("separation trap truth") {
    const auto t = true_measures(make_scenario(ScenarioId::SEPTRAP).settings.front());
    CHECK(t.kappa[0] <= 1e-6);
    CHECK(std::abs(t.auc[0] - 0.5) <= 1e-3);
    CHECK(std::isnan(t.auc_closed[0]));
  }

  TEST_CASE("generated datasets") {
    const auto u = make_scenario(ScenarioId::U1).settings[4];
    const auto a = generate_dataset(u, 50, 123);
    const auto b = generate_dataset(u, 50, 123);
    const auto c = generate_dataset(u, 50, 124);
    CHECK(a.size() == 100);
    CHECK(a.count(1) == 50);
    CHECK(a.count(0) == 50);
    CHECK(a.d.front() == 1);
    CHECK(a.y == b.y);
    CHECK(a.y != c.y);
    CHECK_FALSE(a.has_covariate());

    const auto cs = make_scenario(ScenarioId::C2).settings.front();
    const auto cd = generate_dataset(cs, 200, 5);
    REQUIRE(cd.has_covariate());
    CHECK(cd.x == cd.x_unit);
    for (double x : cd.x) CHECK((x >= -1 && x <= 1));
    CHECK(cd.columns.x == std::optional<std::string>("x"));
    CHECK_THROWS_AS(generate_dataset(cs, 0, 1), DomainError);
  }

  TEST_CASE("generated samples follow the law") {
    const auto s = make_scenario(ScenarioId::U1).settings.back();  // N(3.2, 1.6) vs N(0.4, 0.8)
    const auto data = generate_dataset(s, 20000, 9);
    const auto yd = data.arm_y(1);
    const auto ynd = data.arm_y(0);
    double md = 0, mnd = 0;
    for (double y : yd) md += y;
    for (double y : ynd) mnd += y;
    md /= yd.size();
    mnd /= ynd.size();
    CHECK(std::abs(md - 3.2) < 4 * 1.6 / std::sqrt(20000.0));
    CHECK(std::abs(mnd - 0.4) < 4 * 0.8 / std::sqrt(20000.0));
  }
}
