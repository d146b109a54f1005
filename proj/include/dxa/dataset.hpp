#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dxa/transforms.hpp"

namespace dxa {

struct ColumnMap {
  std::string y = "y";
  std::string d = "d";
  std::optional<std::string> x;
};

/// Biomarker outcomes with binary disease labels (1 = diseased) and an
/// optional scalar covariate, present for all rows or for none.
struct Dataset {
  std::vector<double> y;
  std::vector<int> d;
  std::vector<double> x;       // raw covariate; empty when absent
  std::vector<double> x_unit;  // covariate mapped to [-1, 1]
  std::optional<AffineMap> covariate_map;
  std::optional<Standardization> standardization_d;
  std::optional<Standardization> standardization_nd;
  std::string source;
  ColumnMap columns;

  bool has_covariate() const { return !x.empty(); }
  std::size_t size() const { return y.size(); }
  std::size_t count(int arm) const;
  std::vector<double> arm_y(int arm) const;
  std::vector<double> arm_x(int arm) const;  // on [-1, 1]

  // Fills the per-arm standardization records.
  void record_standardization();
};

/// Parses a header-first CSV. Errors name the offending row (1-based data
/// row, header excluded) or column. The covariate, when mapped, is rescaled
/// jointly over both arms.
Dataset parse_dataset(const std::filesystem::path& path, const ColumnMap& columns);
Dataset parse_dataset(std::istream& in, const ColumnMap& columns, const std::string& source = "<stream>");

void require_estimable(const Dataset& data, std::size_t min_per_arm = 10);

void write_dataset_csv(const Dataset& data, std::ostream& out);

}  // namespace dxa
