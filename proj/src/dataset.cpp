#include "dxa/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dxa/errors.hpp"
#include "dxa/report_io.hpp"

namespace dxa {

namespace {

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\"");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\"");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(ch);
    }
  }
  out.push_back(trim(cell));
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw DataError("missing column '" + name + "'");
}

}  // namespace

std::size_t Dataset::count(int arm) const {
  std::size_t n = 0;
  for (int v : d) n += (v == arm);
  return n;
}

std::vector<double> Dataset::arm_y(int arm) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (d[i] == arm) out.push_back(y[i]);
  return out;
}

std::vector<double> Dataset::arm_x(int arm) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < x_unit.size(); ++i)
    if (d[i] == arm) out.push_back(x_unit[i]);
  return out;
}

void Dataset::record_standardization() {
  standardization_d = standardize(arm_y(1)).second;
  standardization_nd = standardize(arm_y(0)).second;
}

Dataset parse_dataset(std::istream& in, const ColumnMap& columns, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV: no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_csv(line);
  const std::size_t iy = column_index(header, columns.y);
  const std::size_t id = column_index(header, columns.d);
  std::optional<std::size_t> ix;
  if (columns.x) ix = column_index(header, *columns.x);

  Dataset data;
  data.source = source;
  data.columns = columns;
  std::size_t row = 0;
  std::size_t with_x = 0;
  std::vector<std::optional<double>> raw_x;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv(line);
    auto cell = [&](std::size_t k, const std::string& name) -> const std::string& {
      if (k >= cells.size())
        throw DataError("row " + std::to_string(row) + ": missing value for column '" + name + "'");
      return cells[k];
    };
    const auto y = parse_number(cell(iy, columns.y));
    if (!y || !std::isfinite(*y))
      throw DataError("row " + std::to_string(row) + ": column '" + columns.y + "' is not a finite number");
    const auto d = parse_number(cell(id, columns.d));
    if (!d || (*d != 0.0 && *d != 1.0))
      throw DataError("row " + std::to_string(row) + ": column '" + columns.d + "' must be 0 or 1");
    data.y.push_back(*y);
    data.d.push_back(static_cast<int>(*d));
    if (ix) {
      const std::string& text = *ix < cells.size() ? cells[*ix] : std::string();
      if (text.empty() || text == "NA" || text == "NaN" || text == "nan") {
        raw_x.push_back(std::nullopt);
      } else {
        const auto x = parse_number(text);
        if (!x || !std::isfinite(*x))
          throw DataError("row " + std::to_string(row) + ": column '" + *columns.x + "' is not a finite number");
        raw_x.push_back(*x);
        ++with_x;
      }
    }
  }
  if (data.y.empty()) throw DataError("CSV has a header but no data rows");
  if (ix) {
    if (with_x != 0 && with_x != raw_x.size()) throw DataError("covariate must be all-or-none");
    if (with_x == raw_x.size()) {
      for (const auto& v : raw_x) data.x.push_back(*v);
      auto [unit, map] = rescale_covariate(data.x);
      data.x_unit = std::move(unit);
      data.covariate_map = map;
    }
  }
  return data;
}

Dataset parse_dataset(const std::filesystem::path& path, const ColumnMap& columns) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_dataset(in, columns, path.string());
}

void require_estimable(const Dataset& data, std::size_t min_per_arm) {
  for (int arm : {0, 1}) {
    const auto n = data.count(arm);
    if (n < min_per_arm)
      throw DataError("arm d=" + std::to_string(arm) + " has " + std::to_string(n) + " rows; at least " +
                      std::to_string(min_per_arm) + " are required");
  }
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << (data.has_covariate() ? "y,d,x\n" : "y,d\n");
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_number(data.y[i]) << ',' << data.d[i];
    if (data.has_covariate()) out << ',' << format_number(data.x[i]);
    out << '\n';
  }
}

}  // namespace dxa
