// Command-line front end: affinity, fit, simulate.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dxa/bspline.hpp"
#include "dxa/errors.hpp"
#include "dxa/measures.hpp"
#include "dxa/parallel.hpp"
#include "dxa/pipeline.hpp"
#include "dxa/scenario.hpp"

namespace {

using dxa::Json;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<double> parse_list(const std::string& flag, const std::string& text, std::size_t expected) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dxa::DomainError("--" + flag + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected)
    throw dxa::DomainError("--" + flag + " expects " + std::to_string(expected) + " comma-separated values");
  return out;
}

dxa::Density read_grid_density(const std::string& flag, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dxa::DataError("--" + flag + ": cannot open '" + path + "'");
  dxa::GridDensity g;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    try {
      std::size_t used = 0;
      const double y = std::stod(line.substr(0, comma), &used);
      const double f = std::stod(line.substr(comma + 1));
      g.grid.push_back(y);
      g.values.push_back(f);
    } catch (const std::exception&) {
      if (row == 1) continue;  // header
      throw dxa::DataError("--" + flag + ": row " + std::to_string(row) + " of '" + path + "' is not 'y,f'");
    }
  }
  return dxa::Density(std::move(g));
}

struct AffinityArgs {
  std::string family;
  std::string d;
  std::string nd;
  int points = 4096;
  std::string rule = "simpson";
};

Json cmd_affinity(const AffinityArgs& a) {
  using namespace dxa;
  std::optional<TestPair> pair;
  std::optional<double> closed;
  auto need = [&](const std::string& flag, const std::string& v) {
    if (v.empty()) throw DomainError("affinity " + a.family + " requires --" + flag);
  };
  if (a.family == "binormal") {
    need("d", a.d);
    need("nd", a.nd);
    const auto d = parse_list("d", a.d, 2);
    const auto nd = parse_list("nd", a.nd, 2);
    const NormalParams pd{d[0], d[1]}, pnd{nd[0], nd[1]};
    pair = TestPair{pd, pnd};
    closed = affinity_binormal(pd, pnd);
  } else if (a.family == "bibeta") {
    need("d", a.d);
    need("nd", a.nd);
    const auto d = parse_list("d", a.d, 2);
    const auto nd = parse_list("nd", a.nd, 2);
    const BetaParams pd{d[0], d[1]}, pnd{nd[0], nd[1]};
    pair = TestPair{pd, pnd};
    closed = affinity_bibeta(pd, pnd);
  } else if (a.family == "biexp") {
    need("d", a.d);
    need("nd", a.nd);
    const ExponentialParams pd{parse_list("d", a.d, 1)[0]}, pnd{parse_list("nd", a.nd, 1)[0]};
    pair = TestPair{pd, pnd};
    closed = affinity_biexponential(pd, pnd);
  } else if (a.family == "septrap") {
    const auto s = make_scenario(ScenarioId::SEPTRAP).settings.front();
    pair = TestPair{s.diseased(0.0), s.healthy(0.0)};
  } else if (a.family == "grid") {
    need("d", a.d);
    need("nd", a.nd);
    pair = TestPair{read_grid_density("d", a.d), read_grid_density("nd", a.nd)};
  } else {
    throw DomainError("unknown family '" + a.family + "' (expected binormal, bibeta, biexp, septrap or grid)");
  }

  QuadratureSettings q{a.points, QuadratureRule::composite_simpson};
  if (a.rule == "gauss_legendre") q.rule = QuadratureRule::gauss_legendre;
  else if (a.rule != "simpson") throw DomainError("--rule must be simpson or gauss_legendre");

  Json out{{"family", a.family}};
  out["kappa"] = affinity(*pair, q);
  out["kappa_closed_form"] = closed ? Json(*closed) : Json(nullptr);
  try {
    out["kappa_bar"] = affinity_normalized(*pair, q);
  } catch (const DomainError&) {
    out["kappa_bar"] = nullptr;  // not square-integrable
  }
  out["auc_upper"] = auc(*pair, TestDirection::upper_tailed, q);
  out["auc_lower"] = auc(*pair, TestDirection::lower_tailed, q);
  const auto yi = youden(*pair, TestDirection::upper_tailed);
  out["yi"] = yi.yi;
  out["yi_cutoff"] = yi.cutoff;
  out["yi_cutoff_end"] = yi.cutoff_end;
  const auto yia = youden_abs(*pair);
  out["yi_abs"] = yia.yi;
  out["yi_abs_cutoff"] = yia.cutoff;
  out["ovl"] = ovl(*pair, q);
  return out;
}

Json provenance(const std::string& command, const dxa::RunConfig& cfg, const std::string& input, double seconds) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return Json{{"command", command},     {"input", input},
              {"out", cfg.out.string()}, {"threads", dxa::thread_count()},
              {"finished_utc", stamp},  {"elapsed_seconds", seconds},
              {"config_hash", cfg.hash()}, {"master_seed", cfg.mcmc.seed}};
}

// The IW degrees-of-freedom default only differs from the single-coefficient
// case for covariate fits, so say which value is in force.
void note_iwish_default(const dxa::RunConfig& cfg) {
  if (cfg.iwish_df || cfg.preset != dxa::HyperPreset::standard) return;
  const int p = dxa::BSplineBasis{}.dimension();
  std::cerr << "note: covariate fits use inverse-Wishart df = p + 2 = " << p + 2 << " (p = " << p
            << " spline coefficients); set hyper.iwish_df to override\n";
}

void print_paths(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagnostic accuracy via Hellinger affinity with Bayesian nonparametric density estimates"};
  app.require_subcommand(1);

  AffinityArgs aff;
  auto* affinity_cmd = app.add_subcommand("affinity", "Accuracy measures of a known density pair (JSON to stdout)");
  affinity_cmd->add_option("family", aff.family, "binormal | bibeta | biexp | septrap | grid")->required();
  affinity_cmd->add_option("--d", aff.d, "Diseased parameters (mu,sd | a,b | rate) or grid CSV path");
  affinity_cmd->add_option("--nd", aff.nd, "Non-diseased parameters or grid CSV path");
  affinity_cmd->add_option("--points", aff.points, "Quadrature points")->check(CLI::PositiveNumber);
  affinity_cmd->add_option("--rule", aff.rule, "simpson | gauss_legendre");

  std::string csv_path, config_path, y_col, d_col, x_col, out_stem;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads, burn_in, thin, keep;
  auto* fit_cmd = app.add_subcommand("fit", "Fit both arms of a CSV and write posterior summaries");
  fit_cmd->add_option("csv", csv_path, "Input CSV with a header row")->required();
  fit_cmd->add_option("--y-col", y_col, "Biomarker column (default y)");
  fit_cmd->add_option("--d-col", d_col, "Disease indicator column, 0/1 (default d)");
  fit_cmd->add_option("--x-col", x_col, "Covariate column (optional)");

  std::string scenario_id, reading;
  std::optional<std::size_t> n_per_arm;
  std::optional<int> reps, grid_points;
  bool full_scale = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a replicated simulation study");
  sim_cmd->add_option("scenario", scenario_id, "U1 | U2 | C1 | C2 | C3 | SEPTRAP")->required();
  sim_cmd->add_option("--n", n_per_arm, "Observations per arm");
  sim_cmd->add_option("--reps", reps, "Replicates per sub-setting");
  sim_cmd->add_option("--grid", grid_points, "Covariate grid points for conditional scenarios");
  sim_cmd->add_option("--reading", reading, "Second normal argument read as sd or variance");
  sim_cmd->add_flag("--full-scale", full_scale, "100 replicates per sub-setting");

  for (auto* cmd : {fit_cmd, sim_cmd}) {
    cmd->add_option("--config", config_path, "Flat key = value config file");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--threads", threads, "Worker threads (default: all available)");
    cmd->add_option("--out", out_stem, "Output path stem");
    cmd->add_option("--burn-in", burn_in, "MCMC burn-in iterations");
    cmd->add_option("--thin", thin, "MCMC thinning");
    cmd->add_option("--keep", keep, "Kept MCMC iterates");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*affinity_cmd) {
      std::cout << cmd_affinity(aff).dump(2) << '\n';
      return 0;
    }

    const auto started = std::chrono::steady_clock::now();
    const dxa::Command command = *fit_cmd ? dxa::Command::fit : dxa::Command::simulate;
    auto cfg = dxa::RunConfig::defaults(command);
    if (!config_path.empty()) cfg.load(std::filesystem::path(config_path));
    if (seed) cfg.mcmc.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (!out_stem.empty()) cfg.out = out_stem;
    if (burn_in) cfg.set("mcmc.burn_in", std::to_string(*burn_in));
    if (thin) cfg.set("mcmc.thin", std::to_string(*thin));
    if (keep) cfg.set("mcmc.n_keep", std::to_string(*keep));
    dxa::validate(cfg.mcmc);
    dxa::set_thread_count(cfg.threads);
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    if (command == dxa::Command::fit) {
      if (!y_col.empty()) cfg.columns.y = y_col;
      if (!d_col.empty()) cfg.columns.d = d_col;
      if (!x_col.empty()) cfg.columns.x = x_col;
      auto data = dxa::parse_dataset(std::filesystem::path(csv_path), cfg.columns);
      std::cerr << "rows: " << data.size() << " (diseased " << data.count(1) << ", healthy " << data.count(0)
                << ")\n";
      if (data.has_covariate()) note_iwish_default(cfg);
      const auto result = dxa::run_fit(data, cfg);
      print_paths(dxa::write_fit_outputs(result, cfg, cfg.out, provenance("fit", cfg, csv_path, elapsed())));
      return 0;
    }

    cfg.scenario = scenario_id;
    if (n_per_arm) cfg.n_per_arm = *n_per_arm;
    if (reps) cfg.reps = *reps;
    if (full_scale && !reps) cfg.reps = 100;
    if (grid_points) cfg.grid_points = *grid_points;
    if (!reading.empty()) cfg.set("study.reading", reading);
    const auto scenario = dxa::make_scenario(dxa::scenario_from_string(cfg.scenario), cfg.reading);
    if (scenario.conditional()) note_iwish_default(cfg);
    const auto report = dxa::run_study(cfg.plan(), scenario);
    print_paths(dxa::write_study_outputs(report, cfg, cfg.out, provenance("simulate", cfg, cfg.scenario, elapsed())));
    if (!report.all_succeeded()) {
      std::cerr << "error: some replicates failed; see the report\n";
      return kExitNumeric;
    }
    return 0;
  } catch (const dxa::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dxa::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const dxa::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
