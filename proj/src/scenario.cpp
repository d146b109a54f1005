#include "dxa/scenario.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dxa/errors.hpp"
#include "dxa/measures.hpp"

namespace dxa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Normal with the table's second argument read per the scenario's reading.
struct TableNormal {
  ScaleReading reading;
  Density operator()(double mean, double s) const {
    return NormalParams{mean, reading == ScaleReading::sd ? s : std::sqrt(s)};
  }
};

Density two_normals(double w, Density a, Density b) {
  return MixtureModel{{w, 1.0 - w}, {std::move(a), std::move(b)}};
}

std::vector<SubSetting> u1(TableNormal phi) {
  std::vector<SubSetting> out;
  for (double mu : {0.8, 1.6, 3.2})
    for (double sd : {0.8, 1.2, 1.6})
      out.push_back({"mu_D=" + fmt(mu) + ",sigma_D=" + fmt(sd), [=](double) { return phi(mu, sd); },
                     [=](double) { return phi(0.4, 0.8); }, false});
  return out;
}

std::vector<SubSetting> u2(TableNormal phi) {
  std::vector<SubSetting> out;
  for (double c : {0.6, 1.0, 1.6}) {
    const double sd = 0.2 * c;
    for (auto [m1, m2] : {std::pair{0.2, 3.2}, std::pair{1.1, 4.1}, std::pair{2.0, 5.0}}) {
      const double mu1 = m1 * c;
      const double mu2 = m2 * c;
      out.push_back({"c=" + fmt(c) + ",mu_1D=" + fmt(mu1) + ",mu_2D=" + fmt(mu2),
                     [=](double) { return two_normals(0.7, phi(mu1, sd), phi(mu2, sd)); },
                     [=](double) { return two_normals(0.7, phi(0.1, 0.2), phi(3.1, 0.2)); }, false});
    }
  }
  return out;
}

SubSetting septrap() {
  const double sd_d = 1.0 / 3.0;
  const double sd_nd = 1.0 / 4.0;
  auto d = [=](double) {
    return two_normals(0.5, TruncNormalParams{-6.0, -4.0, -5.0, sd_d}, TruncNormalParams{4.0, 6.0, 5.0, sd_d});
  };
  auto nd = [=](double) { return Density(TruncNormalParams{-2.0, 2.0, 0.0, sd_nd}); };
  return {"example2", d, nd, false};
}

std::optional<NormalMixture> as_normal_mixture(const Density& d) {
  if (const auto* n = std::get_if<NormalParams>(&d.variant())) return NormalMixture{{1.0}, {n->mu}, {n->sigma}};
  if (const auto* m = std::get_if<MixtureModel>(&d.variant())) {
    for (const auto& c : m->components)
      if (!std::holds_alternative<NormalParams>(c.variant())) return std::nullopt;
    return NormalMixture::from(*m);
  }
  return std::nullopt;
}

}  // namespace

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::U1: return "U1";
    case ScenarioId::U2: return "U2";
    case ScenarioId::C1: return "C1";
    case ScenarioId::C2: return "C2";
    case ScenarioId::C3: return "C3";
    case ScenarioId::SEPTRAP: return "SEPTRAP";
  }
  return "unknown";
}

std::string to_string(ScaleReading r) { return r == ScaleReading::sd ? "sd" : "variance"; }

ScenarioId scenario_from_string(const std::string& s) {
  for (auto id : {ScenarioId::U1, ScenarioId::U2, ScenarioId::C1, ScenarioId::C2, ScenarioId::C3, ScenarioId::SEPTRAP})
    if (to_string(id) == s) return id;
  throw DomainError("unknown scenario '" + s + "' (expected U1, U2, C1, C2, C3 or SEPTRAP)");
}

double c3_weight(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Scenario make_scenario(ScenarioId id, ScaleReading reading) {
  const TableNormal phi{reading};
  Scenario s{id, reading, {}};
  switch (id) {
    case ScenarioId::U1: s.settings = u1(phi); break;
    case ScenarioId::U2: s.settings = u2(phi); break;
    case ScenarioId::C1:
      s.settings.push_back({"C1", [=](double x) { return phi(2.0 + 4.0 * x, 2.0); },
                            [=](double x) { return phi(0.5 + x, 1.5); }, true});
      break;
    case ScenarioId::C2:
      s.settings.push_back({"C2", [=](double x) { return phi(0.5 + x * x, 1.0); },
                            [=](double x) { return phi(std::sin(std::numbers::pi * (x + 1.0)), 0.5); }, true});
      break;
    case ScenarioId::C3:
      s.settings.push_back(
          {"C3", [=](double x) { return two_normals(c3_weight(x), phi(x, 0.5), phi(x * x * x, 1.0)); },
           [=](double x) { return phi(std::sin(std::numbers::pi * x), std::sqrt(0.2 + 0.5 * std::exp(x))); }, true});
      break;
    case ScenarioId::SEPTRAP: s.settings.push_back(septrap()); break;
  }
  return s;
}

TrueMeasures true_measures(const SubSetting& s, std::span<const double> xgrid, QuadratureSettings q) {
  if (s.conditional && xgrid.empty()) throw DomainError("conditional truth needs a covariate grid");
  TrueMeasures t;
  t.grid.assign(xgrid.begin(), xgrid.end());
  const std::vector<double> cols = s.conditional ? t.grid : std::vector<double>{0.0};
  if (!s.conditional) t.grid.clear();
  for (double x : cols) {
    const TestPair pair{s.diseased(x), s.healthy(x)};
    t.kappa.push_back(affinity(pair, q));
    t.auc.push_back(auc(pair, TestDirection::upper_tailed, q));
    const auto* nd = std::get_if<NormalParams>(&pair.diseased.variant());
    const auto* nh = std::get_if<NormalParams>(&pair.healthy.variant());
    t.kappa_closed.push_back(nd && nh ? affinity_binormal(*nd, *nh) : kNaN);
    const auto md = as_normal_mixture(pair.diseased);
    const auto mh = as_normal_mixture(pair.healthy);
    t.auc_closed.push_back(md && mh ? auc_mixture_normal(*md, *mh) : kNaN);
  }
  return t;
}

Dataset generate_dataset(const SubSetting& s, std::size_t n_per_arm, std::uint64_t seed) {
  if (n_per_arm == 0) throw DomainError("n_per_arm must be positive");
  Dataset data;
  data.source = "simulated:" + s.label;
  const Rng root(seed);
  for (int arm : {1, 0}) {
    Rng rng = root.split(static_cast<std::uint64_t>(arm));
    const auto& law = arm == 1 ? s.diseased : s.healthy;
    if (!s.conditional) {
      for (double y : sample(law(0.0), n_per_arm, rng)) {
        data.y.push_back(y);
        data.d.push_back(arm);
      }
      continue;
    }
    for (std::size_t i = 0; i < n_per_arm; ++i) {
      const double x = -1.0 + 2.0 * rng.uniform();
      data.y.push_back(draw(law(x), rng));
      data.d.push_back(arm);
      data.x.push_back(x);
    }
  }
  if (s.conditional) {
    data.x_unit = data.x;
    data.covariate_map = AffineMap{-1.0, 1.0};
    data.columns.x = "x";
  }
  return data;
}

}  // namespace dxa
