#include "dxa/study.hpp"

#include <iostream>
#include <optional>

#include "dxa/errors.hpp"
#include "dxa/posterior.hpp"

namespace dxa {

namespace {

struct ReplicateResult {
  std::vector<double> kappa;
  std::vector<double> auc;
  std::optional<std::string> error;
};

ReplicateResult run_replicate(const SubSetting& s, const ReplicationPlan& plan, std::uint64_t seed) {
  ReplicateResult out;
  try {
    const Rng root(seed);
    const Dataset data = generate_dataset(s, plan.n_per_arm, root.split(0).seed());
    McmcConfig cfg_d = plan.mcmc;
    McmcConfig cfg_nd = plan.mcmc;
    cfg_d.seed = root.split(1).seed();
    cfg_nd.seed = root.split(2).seed();
    const Execution inner = Execution::serial;
    if (s.conditional) {
      const BSplineBasis basis;
      const auto fd = fit_ddp(data.arm_y(1), data.arm_x(1), cfg_d, basis);
      const auto fnd = fit_ddp(data.arm_y(0), data.arm_x(0), cfg_nd, basis);
      out.kappa = posterior_affinity_conditional(fd.draws, fnd.draws, plan.xgrid, plan.quad, inner).mean;
      out.auc = posterior_auc(fd.draws, fnd.draws, TestDirection::upper_tailed, plan.xgrid, inner).mean;
    } else {
      const auto fd = fit_dpm(data.arm_y(1), cfg_d);
      const auto fnd = fit_dpm(data.arm_y(0), cfg_nd);
      out.kappa = posterior_affinity(fd.draws, fnd.draws, plan.quad, inner).mean;
      out.auc = posterior_auc(fd.draws, fnd.draws, TestDirection::upper_tailed, {}, inner).mean;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

MeasureBand band(std::vector<double> truth, std::vector<std::vector<double>> estimates, Measure m,
                 const std::vector<double>& grid) {
  MeasureBand b;
  b.truth = std::move(truth);
  if (!estimates.empty()) {
    auto s = summarize(m, grid, std::move(estimates));
    b.estimates = std::move(s.draws);
    b.mc_mean = std::move(s.mean);
    b.lo = std::move(s.lo95);
    b.hi = std::move(s.hi95);
  }
  return b;
}

}  // namespace

ReplicationPlan ReplicationPlan::desk() {
  ReplicationPlan p;
  p.xgrid = equispaced_grid(21);
  return p;
}

ReplicationPlan ReplicationPlan::full_scale() {
  ReplicationPlan p = desk();
  p.n_reps = 100;
  return p;
}

void validate(const ReplicationPlan& plan) {
  if (plan.n_per_arm < 20) throw DomainError("n_per_arm must be at least 20");
  if (plan.n_reps < 1) throw DomainError("n_reps must be positive");
  validate(plan.mcmc);
  validate(QuadratureSpec::over(0.0, 1.0, plan.quad));
  for (double x : plan.xgrid)
    if (!(x >= -1.0 && x <= 1.0)) throw DomainError("covariate grid must lie in [-1, 1]");
}

std::vector<double> equispaced_grid(int points, double lo, double hi) {
  if (points < 2) throw DomainError("a grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
  g.back() = hi;
  return g;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t setting, std::size_t rep) {
  return Rng(master_seed).split(setting).split(rep).seed();
}

bool StudyReport::all_succeeded() const {
  for (const auto& s : settings)
    if (!s.failures.empty()) return false;
  return true;
}

StudyReport run_study(const ReplicationPlan& plan, const Scenario& scenario, Execution exec) {
  validate(plan);
  if (scenario.conditional() && plan.xgrid.empty()) throw DomainError("conditional scenario needs a covariate grid");
  const std::size_t n_settings = scenario.settings.size();
  const auto reps = static_cast<std::size_t>(plan.n_reps);

  std::vector<ReplicateResult> results(n_settings * reps);
  for_each_index(results.size(), exec, [&](std::size_t k) {
    const std::size_t s = k / reps;
    const std::size_t r = k % reps;
    results[k] = run_replicate(scenario.settings[s], plan, replicate_seed(plan.master_seed, s, r));
  });

  StudyReport report{scenario.id, scenario.reading, plan, {}};
  for (std::size_t s = 0; s < n_settings; ++s) {
    const SubSetting& sub = scenario.settings[s];
    SettingReport sr;
    sr.label = sub.label;
    if (sub.conditional) sr.grid = plan.xgrid;
    const auto truth = true_measures(sub, sr.grid, plan.quad);
    std::vector<std::vector<double>> kappa;
    std::vector<std::vector<double>> auc;
    for (std::size_t r = 0; r < reps; ++r) {
      auto& res = results[s * reps + r];
      if (res.error) {
        sr.failures.push_back({static_cast<int>(r), *res.error});
        std::cerr << "warning: " << to_string(scenario.id) << " [" << sub.label << "] replicate " << r
                  << " failed and is excluded: " << *res.error << '\n';
        continue;
      }
      sr.reps.push_back(static_cast<int>(r));
      kappa.push_back(std::move(res.kappa));
      auc.push_back(std::move(res.auc));
    }
    sr.kappa = band(truth.kappa, std::move(kappa), Measure::kappa, sr.grid);
    sr.auc = band(truth.auc, std::move(auc), Measure::auc_upper, sr.grid);
    report.settings.push_back(std::move(sr));
  }
  return report;
}

}  // namespace dxa
