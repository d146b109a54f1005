#include "dxa/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
  return std::filesystem::path(stem.string() + suffix);
}

Json occupancy(const PosteriorFit& fit) {
  double total = 0.0;
  for (int k : fit.occupied) total += k;
  const auto [lo, hi] = std::minmax_element(fit.occupied.begin(), fit.occupied.end());
  return Json{{"mean", total / static_cast<double>(fit.occupied.size())}, {"min", *lo}, {"max", *hi}};
}

Json standardization_json(const Standardization& s) { return Json{{"location", s.location}, {"scale", s.scale}}; }

McmcConfig with_seed(McmcConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return cfg;
}

}  // namespace

std::vector<double> density_grid(std::span<const double> ys, int points) {
  if (ys.empty()) throw DataError("no outcomes for the density grid");
  if (points < 2) throw DomainError("density grid needs at least 2 points");
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  const double range = *hi - *lo;
  return equispaced_grid(points, *lo - 0.5 * range, *hi + 0.5 * range);
}

std::string data_fingerprint(const Dataset& data) {
  std::ostringstream os;
  write_dataset_csv(data, os);
  return hex64(fnv1a64(os.str()));
}

FitResult run_fit(const Dataset& data, const RunConfig& cfg) {
  require_estimable(data);
  const Rng master(cfg.mcmc.seed);
  const auto y_d = data.arm_y(1);
  const auto y_nd = data.arm_y(0);
  const Execution exec = Execution::parallel;

  // Unconditional fits of both arms run concurrently.
  std::vector<PosteriorFit> dpm(2);
  for_each_index(2, exec, [&](std::size_t arm) {
    const auto& ys = arm == 1 ? y_d : y_nd;
    dpm[arm] = fit_dpm(ys, with_seed(cfg.mcmc, master.split(10 + arm).seed()), cfg.hyper(1));
  });
  const auto& fd = dpm[1];
  const auto& fnd = dpm[0];

  FitResult r;
  r.stamp = cfg.stamp();
  r.summaries.push_back(posterior_affinity(fd.draws, fnd.draws, cfg.quad, exec));
  r.summaries.push_back(posterior_auc(fd.draws, fnd.draws, TestDirection::upper_tailed, {}, exec));
  r.summaries.push_back(posterior_auc(fd.draws, fnd.draws, TestDirection::lower_tailed, {}, exec));
  r.summaries.push_back(posterior_youden(fd.draws, fnd.draws, TestDirection::upper_tailed, {}, cfg.youden_grid, exec));
  r.summaries.push_back(posterior_ovl(fd.draws, fnd.draws, {}, cfg.quad, exec));

  std::vector<double> pooled = data.y;
  r.density_grid = density_grid(pooled, cfg.density_points);

  Json occupied{{"diseased", occupancy(fd)}, {"healthy", occupancy(fnd)}};
  if (data.has_covariate()) {
    const BSplineBasis basis;
    const auto x_d = data.arm_x(1);
    const auto x_nd = data.arm_x(0);
    std::vector<PosteriorFit> ddp(2);
    for_each_index(2, exec, [&](std::size_t arm) {
      const auto& ys = arm == 1 ? y_d : y_nd;
      const auto& xs = arm == 1 ? x_d : x_nd;
      ddp[arm] = fit_ddp(ys, xs, with_seed(cfg.mcmc, master.split(20 + arm).seed()), cfg.hyper(basis.dimension()),
                         basis);
    });
    const auto grid = cfg.xgrid();
    auto kx = posterior_affinity_conditional(ddp[1].draws, ddp[0].draws, grid, cfg.quad, exec);
    auto ax = posterior_auc(ddp[1].draws, ddp[0].draws, TestDirection::upper_tailed, grid, exec);
    for (auto* s : {&kx, &ax})
      for (double& x : s->grid) x = data.covariate_map->inverse(x);
    r.summaries.push_back(std::move(kx));
    r.summaries.push_back(std::move(ax));
    r.density_covariate = data.covariate_map->inverse(0.0);
    r.density_d = posterior_mean_density(ddp[1].draws, r.density_grid, 0.0);
    r.density_nd = posterior_mean_density(ddp[0].draws, r.density_grid, 0.0);
    occupied["diseased_conditional"] = occupancy(ddp[1]);
    occupied["healthy_conditional"] = occupancy(ddp[0]);
  } else {
    r.density_d = posterior_mean_density(fd.draws, r.density_grid);
    r.density_nd = posterior_mean_density(fnd.draws, r.density_grid);
  }

  Json summaries = Json::array();
  for (const auto& s : r.summaries) summaries.push_back(to_json(s));
  Json covariate = nullptr;
  if (data.has_covariate())
    covariate = {{"column", *data.columns.x},
                 {"min", data.covariate_map->min},
                 {"max", data.covariate_map->max},
                 {"density_slice", *r.density_covariate}};
  r.summary = Json{{"config_hash", r.stamp.config_hash},
                   {"master_seed", r.stamp.master_seed},
                   {"data",
                    {{"rows", data.size()},
                     {"n_diseased", data.count(1)},
                     {"n_healthy", data.count(0)},
                     {"fingerprint", data_fingerprint(data)},
                     {"covariate", covariate}}},
                   {"standardization",
                    {{"diseased", standardization_json(fd.standardization)},
                     {"healthy", standardization_json(fnd.standardization)}}},
                   {"occupied_clusters", occupied},
                   {"summaries", summaries}};
  return r;
}

std::vector<std::filesystem::path> write_fit_outputs(const FitResult& r, const RunConfig& cfg,
                                                     const std::filesystem::path& stem, const Json& provenance) {
  std::vector<std::filesystem::path> paths{with_suffix(stem, ".summary.json"), with_suffix(stem, ".curves.csv"),
                                           with_suffix(stem, ".density.csv"), with_suffix(stem, ".resolved-config.json"),
                                           with_suffix(stem, ".provenance.json")};
  write_json_file(paths[0], r.summary);

  std::ostringstream curves;
  write_curves_csv(curves, r.summaries, r.stamp);
  write_text_file(paths[1], curves.str());

  std::ostringstream density;
  write_stamp_comment(density, r.stamp);
  density << "arm,y,f_mean\n";
  for (int arm : {1, 0}) {
    const auto& f = arm == 1 ? r.density_d : r.density_nd;
    for (std::size_t k = 0; k < r.density_grid.size(); ++k)
      density << arm << ',' << format_number(r.density_grid[k]) << ',' << format_number(f[k]) << '\n';
  }
  write_text_file(paths[2], density.str());

  Json resolved = cfg.resolved();
  resolved["config_hash"] = r.stamp.config_hash;
  write_json_file(paths[3], resolved);
  write_json_file(paths[4], provenance);
  return paths;
}

std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report, const RunConfig& cfg,
                                                       const std::filesystem::path& stem, const Json& provenance) {
  const Stamp stamp = cfg.stamp();
  std::vector<std::filesystem::path> paths{with_suffix(stem, ".study.json"), with_suffix(stem, ".study.csv"),
                                           with_suffix(stem, ".resolved-config.json"),
                                           with_suffix(stem, ".provenance.json")};
  write_json_file(paths[0], to_json(report, stamp));
  std::ostringstream csv;
  write_study_csv(csv, report, stamp);
  write_text_file(paths[1], csv.str());
  Json resolved = cfg.resolved();
  resolved["config_hash"] = stamp.config_hash;
  write_json_file(paths[2], resolved);
  write_json_file(paths[3], provenance);
  return paths;
}

}  // namespace dxa
