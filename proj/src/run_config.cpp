#include "dxa/run_config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

const std::set<std::string> kCommonKeys = {
    "mcmc.burn_in",   "mcmc.thin",     "mcmc.n_keep",    "mcmc.m_aux", "mcmc.n_predictive", "seed",
    "hyper.preset",   "hyper.ig_shape", "hyper.ig_scale", "hyper.iwish_df", "hyper.update", "quad.points",
    "quad.rule",      "grid.points",   "grid.lo",        "grid.hi",    "threads",           "out"};
const std::set<std::string> kFitKeys = {"columns.y", "columns.d", "columns.x", "density.points", "youden.grid"};
const std::set<std::string> kSimulateKeys = {"scenario", "study.n_per_arm", "study.reps", "study.reading"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_as(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw DomainError("invalid value '" + value + "' for key '" + key + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw DomainError("invalid value '" + value + "' for key '" + key + "' (expected true or false)");
}

}  // namespace

std::string to_string(Command c) { return c == Command::fit ? "fit" : "simulate"; }

RunConfig RunConfig::defaults(Command c) {
  RunConfig r;
  r.command = c;
  if (c == Command::fit) {
    r.mcmc.burn_in = 20000;
    r.mcmc.thin = 100;
    r.mcmc.n_keep = 1800;
  }
  return r;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  const bool known = kCommonKeys.count(key) || (command == Command::fit ? kFitKeys : kSimulateKeys).count(key);
  if (!known) throw DomainError("unknown config key '" + key + "' for command " + to_string(command));
  if (key == "mcmc.burn_in") mcmc.burn_in = parse_as<int>(key, value);
  else if (key == "mcmc.thin") mcmc.thin = parse_as<int>(key, value);
  else if (key == "mcmc.n_keep") mcmc.n_keep = parse_as<int>(key, value);
  else if (key == "mcmc.m_aux") mcmc.m_aux = parse_as<int>(key, value);
  else if (key == "mcmc.n_predictive") mcmc.n_predictive = parse_as<int>(key, value);
  else if (key == "seed") mcmc.seed = parse_as<std::uint64_t>(key, value);
  else if (key == "hyper.preset") {
    if (value == "standard") preset = HyperPreset::standard;
    else if (value == "literal") preset = HyperPreset::literal;
    else throw DomainError("invalid value '" + value + "' for key 'hyper.preset' (expected standard or literal)");
  } else if (key == "hyper.ig_shape") ig_shape = parse_as<double>(key, value);
  else if (key == "hyper.ig_scale") ig_scale = parse_as<double>(key, value);
  else if (key == "hyper.iwish_df") iwish_df = parse_as<double>(key, value);
  else if (key == "hyper.update") update_hyper = parse_bool(key, value);
  else if (key == "quad.points") quad.n_points = parse_as<int>(key, value);
  else if (key == "quad.rule") {
    if (value == "simpson") quad.rule = QuadratureRule::composite_simpson;
    else if (value == "gauss_legendre") quad.rule = QuadratureRule::gauss_legendre;
    else throw DomainError("invalid value '" + value + "' for key 'quad.rule' (expected simpson or gauss_legendre)");
  } else if (key == "grid.points") grid_points = parse_as<int>(key, value);
  else if (key == "grid.lo") grid_lo = parse_as<double>(key, value);
  else if (key == "grid.hi") grid_hi = parse_as<double>(key, value);
  else if (key == "threads") threads = parse_as<int>(key, value);
  else if (key == "out") out = value;
  else if (key == "columns.y") columns.y = value;
  else if (key == "columns.d") columns.d = value;
  else if (key == "columns.x") columns.x = value.empty() ? std::nullopt : std::optional<std::string>(value);
  else if (key == "density.points") density_points = parse_as<int>(key, value);
  else if (key == "youden.grid") youden_grid = parse_as<int>(key, value);
  else if (key == "scenario") scenario = value;
  else if (key == "study.n_per_arm") n_per_arm = parse_as<std::size_t>(key, value);
  else if (key == "study.reps") reps = parse_as<int>(key, value);
  else if (key == "study.reading") {
    if (value == "sd") reading = ScaleReading::sd;
    else if (value == "variance") reading = ScaleReading::variance;
    else throw DomainError("invalid value '" + value + "' for key 'study.reading' (expected sd or variance)");
  }
}

void RunConfig::load(std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path.string() + "'");
  load(in);
}

BaseMeasureHyper RunConfig::hyper(int p) const {
  auto h = preset == HyperPreset::literal ? BaseMeasureHyper::literal(p) : BaseMeasureHyper::defaults(p);
  if (ig_shape) h.ig_shape = *ig_shape;
  if (ig_scale) h.ig_scale = *ig_scale;
  if (iwish_df) h.iwish_df = *iwish_df;
  h.update_hyper = update_hyper;
  validate(h);
  return h;
}

std::vector<double> RunConfig::xgrid() const {
  if (!(grid_lo >= -1.0 && grid_hi <= 1.0 && grid_lo < grid_hi))
    throw DomainError("grid.lo and grid.hi must satisfy -1 <= lo < hi <= 1");
  return equispaced_grid(grid_points, grid_lo, grid_hi);
}

ReplicationPlan RunConfig::plan() const {
  ReplicationPlan p;
  p.n_per_arm = n_per_arm;
  p.n_reps = reps;
  p.mcmc = mcmc;
  p.xgrid = xgrid();
  p.quad = quad;
  p.master_seed = mcmc.seed;
  validate(p);
  return p;
}

Json RunConfig::resolved() const {
  const auto h = hyper(1);
  Json j{{"command", to_string(command)},
         {"seed", mcmc.seed},
         {"mcmc",
          {{"burn_in", mcmc.burn_in},
           {"thin", mcmc.thin},
           {"n_keep", mcmc.n_keep},
           {"m_aux", mcmc.m_aux},
           {"n_predictive", mcmc.n_predictive}}},
         {"hyper",
          {{"preset", preset == HyperPreset::standard ? "standard" : "literal"},
           {"ig_shape", h.ig_shape},
           {"ig_scale", h.ig_scale},
           {"iwish_df", iwish_df ? Json(*iwish_df) : Json("p+2")},
           {"update", update_hyper},
           {"alpha", 1.0}}},
         {"quad",
          {{"points", quad.n_points}, {"rule", quad.rule == QuadratureRule::composite_simpson ? "simpson" : "gauss_legendre"}}},
         {"grid", {{"points", grid_points}, {"lo", grid_lo}, {"hi", grid_hi}}}};
  if (preset == HyperPreset::literal && !iwish_df) j["hyper"]["iwish_df"] = 1.0;
  if (command == Command::fit) {
    j["columns"] = {{"y", columns.y}, {"d", columns.d}, {"x", columns.x ? Json(*columns.x) : Json(nullptr)}};
    j["density"] = {{"points", density_points}};
    j["youden"] = {{"grid", youden_grid}};
  } else {
    j["study"] = {{"scenario", scenario}, {"n_per_arm", n_per_arm}, {"reps", reps}, {"reading", to_string(reading)}};
  }
  return j;
}

std::string RunConfig::hash() const { return hex64(fnv1a64(resolved().dump())); }

}  // namespace dxa
