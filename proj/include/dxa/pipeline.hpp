#pragma once

#include <filesystem>
#include <vector>

#include "dxa/dataset.hpp"
#include "dxa/posterior.hpp"
#include "dxa/report_io.hpp"
#include "dxa/run_config.hpp"
#include "dxa/study.hpp"

namespace dxa {

struct FitResult {
  Stamp stamp;
  // Scalar summaries from unconditional fits, then kappa(x) and AUC(x) on
  // the original covariate scale when the data carry a covariate.
  std::vector<AccuracySummary> summaries;
  std::vector<double> density_grid;  // original biomarker scale
  std::vector<double> density_d;
  std::vector<double> density_nd;
  std::optional<double> density_covariate;  // covariate value of the density slice
  Json summary;                             // contents of <stem>.summary.json
};

/// Fits both arms and computes posterior summaries. Deterministic for a
/// fixed config regardless of thread count.
FitResult run_fit(const Dataset& data, const RunConfig& cfg);

// 512-point grid spanning [min - range/2, max + range/2] of the pooled outcomes.
std::vector<double> density_grid(std::span<const double> ys, int points);

std::vector<std::filesystem::path> write_fit_outputs(const FitResult& result, const RunConfig& cfg,
                                                     const std::filesystem::path& stem, const Json& provenance);

std::vector<std::filesystem::path> write_study_outputs(const StudyReport& report, const RunConfig& cfg,
                                                       const std::filesystem::path& stem, const Json& provenance);

std::string data_fingerprint(const Dataset& data);

}  // namespace dxa
