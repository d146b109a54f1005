#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "dxa/dataset.hpp"
#include "dxa/dpm.hpp"
#include "dxa/report_io.hpp"
#include "dxa/scenario.hpp"
#include "dxa/study.hpp"

namespace dxa {

enum class Command { fit, simulate };

enum class HyperPreset { standard, literal };

/// Parameters of one fit or simulate run.
///
/// Serialized as a flat "key = value" document; '#' starts a comment. Keys
/// that do not belong to the command are rejected. The resolved config
/// (everything that affects results) is hashed to stamp output files; thread
/// count and output location are excluded because they do not.
struct RunConfig {
  Command command = Command::fit;
  McmcConfig mcmc;  // mcmc.seed is the master seed
  HyperPreset preset = HyperPreset::standard;
  std::optional<double> ig_shape;
  std::optional<double> ig_scale;
  std::optional<double> iwish_df;
  bool update_hyper = true;
  QuadratureSettings quad;
  int grid_points = 21;
  double grid_lo = -1.0;
  double grid_hi = 1.0;
  int density_points = 512;
  int youden_grid = 1000;
  ColumnMap columns;
  // simulate
  std::string scenario = "U1";
  std::size_t n_per_arm = 500;
  int reps = 20;
  ScaleReading reading = ScaleReading::sd;
  // not part of the hash
  int threads = 0;
  std::filesystem::path out = "dxa_out";

  static RunConfig defaults(Command c);

  // Throws DomainError naming the key on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  void load(std::istream& in);
  void load(const std::filesystem::path& path);

  BaseMeasureHyper hyper(int p) const;
  std::vector<double> xgrid() const;
  ReplicationPlan plan() const;

  Json resolved() const;
  std::string hash() const;
  Stamp stamp() const { return {hash(), mcmc.seed}; }
};

std::string to_string(Command c);

}  // namespace dxa
