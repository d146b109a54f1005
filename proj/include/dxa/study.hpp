#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dxa/dpm.hpp"
#include "dxa/quadrature.hpp"
#include "dxa/scenario.hpp"

namespace dxa {

struct ReplicationPlan {
  std::size_t n_per_arm = 500;
  int n_reps = 20;
  McmcConfig mcmc;
  std::vector<double> xgrid;  // used by conditional scenarios
  QuadratureSettings quad;
  std::uint64_t master_seed = 1;

  // Desk-scale defaults: 20 replicates, 21 equispaced covariate points.
  static ReplicationPlan desk();
  // 100 replicates as in the published study.
  static ReplicationPlan full_scale();
};

void validate(const ReplicationPlan& plan);

std::vector<double> equispaced_grid(int points, double lo = -1.0, double hi = 1.0);

// Seed of replicate r of sub-setting s; independent of thread scheduling.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t setting, std::size_t rep);

struct MeasureBand {
  std::vector<double> truth;
  std::vector<std::vector<double>> estimates;  // successful replicates x grid
  std::vector<double> mc_mean;
  std::vector<double> lo;  // 2.5th percentile of the estimates
  std::vector<double> hi;  // 97.5th percentile
};

struct ReplicateFailure {
  int rep = 0;
  std::string message;
};

struct SettingReport {
  std::string label;
  std::vector<double> grid;  // empty for unconditional settings
  MeasureBand kappa;
  MeasureBand auc;
  std::vector<int> reps;  // indices of successful replicates
  std::vector<ReplicateFailure> failures;
};

struct StudyReport {
  ScenarioId scenario = ScenarioId::U1;
  ScaleReading reading = ScaleReading::sd;
  ReplicationPlan plan;
  std::vector<SettingReport> settings;

  bool all_succeeded() const;
};

/// Per replicate: generate, fit each arm (DPM or DDP), and take posterior
/// means of kappa and the upper-tailed AUC. Replicates run concurrently.
/// A failed replicate is excluded from the aggregates, recorded, and
/// reported on stderr.
StudyReport run_study(const ReplicationPlan& plan, const Scenario& scenario, Execution exec = Execution::parallel);

}  // namespace dxa
