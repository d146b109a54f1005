#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dxa/dataset.hpp"
#include "dxa/density.hpp"
#include "dxa/quadrature.hpp"

namespace dxa {

enum class ScenarioId { U1, U2, C1, C2, C3, SEPTRAP };

// How the second argument of the simulation-table normals is read.
enum class ScaleReading { sd, variance };

std::string to_string(ScenarioId id);
std::string to_string(ScaleReading r);
ScenarioId scenario_from_string(const std::string& s);

/// One density pair of a scenario. Unconditional pairs ignore x.
struct SubSetting {
  std::string label;
  std::function<Density(double)> diseased;
  std::function<Density(double)> healthy;
  bool conditional = false;
};

struct Scenario {
  ScenarioId id = ScenarioId::U1;
  ScaleReading reading = ScaleReading::sd;
  std::vector<SubSetting> settings;

  bool conditional() const { return !settings.empty() && settings.front().conditional; }
};

Scenario make_scenario(ScenarioId id, ScaleReading reading = ScaleReading::sd);

// Logistic weight (1 + exp(-x))^{-1} of the first diseased component in C3.
double c3_weight(double x);

/// Ground truth by quadrature, with closed forms alongside where both arms
/// are normals (kappa and AUC) or normal mixtures (AUC). Missing closed
/// forms are NaN. Unconditional settings use an empty grid and one column.
struct TrueMeasures {
  std::vector<double> grid;
  std::vector<double> kappa;
  std::vector<double> auc;  // upper-tailed
  std::vector<double> kappa_closed;
  std::vector<double> auc_closed;
};

TrueMeasures true_measures(const SubSetting& s, std::span<const double> xgrid = {}, QuadratureSettings q = {});

/// Draws n_per_arm rows per arm. Conditional settings draw x ~ Unif(-1, 1)
/// per row; the covariate is already on [-1, 1] and is not rescaled.
Dataset generate_dataset(const SubSetting& s, std::size_t n_per_arm, std::uint64_t seed);

}  // namespace dxa
