#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "dxa/posterior.hpp"
#include "dxa/study.hpp"

namespace dxa {

using Json = nlohmann::json;

// Decimal with 17 significant digits; parses back to the same double.
std::string format_number(double v);

// Identifies a result file: the resolved-config hash and the master seed.
struct Stamp {
  std::string config_hash;
  std::uint64_t master_seed = 0;
};

Json to_json(const AccuracySummary& s);
AccuracySummary summary_from_json(const Json& j);

Json to_json(const StudyReport& r, const Stamp& stamp);

// First line "# config_hash=<hex> master_seed=<n>", then a header row.
void write_stamp_comment(std::ostream& out, const Stamp& stamp);

// Columns: measure, x, mean, lo95, hi95 (x empty for scalar summaries).
void write_curves_csv(std::ostream& out, std::span<const AccuracySummary> summaries, const Stamp& stamp);

// One row per sub-setting x grid point x statistic, with kappa and auc columns.
void write_study_csv(std::ostream& out, const StudyReport& r, const Stamp& stamp);

// Writes j with two-space indentation and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace dxa
