#include "dxa/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "dxa/errors.hpp"

namespace dxa {

namespace {

Json band_json(const MeasureBand& b) {
  return Json{{"truth", b.truth}, {"mc_mean", b.mc_mean}, {"p2_5", b.lo}, {"p97_5", b.hi}, {"estimates", b.estimates}};
}

std::string rule_name(QuadratureRule r) {
  return r == QuadratureRule::composite_simpson ? "simpson" : "gauss_legendre";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const AccuracySummary& s) {
  return Json{{"measure", to_string(s.measure)}, {"grid", s.grid}, {"mean", s.mean},
              {"lo95", s.lo95},                  {"hi95", s.hi95}, {"draws", s.draws}};
}

AccuracySummary summary_from_json(const Json& j) {
  try {
    AccuracySummary s;
    s.measure = measure_from_string(j.at("measure").get<std::string>());
    s.grid = j.at("grid").get<std::vector<double>>();
    s.mean = j.at("mean").get<std::vector<double>>();
    s.lo95 = j.at("lo95").get<std::vector<double>>();
    s.hi95 = j.at("hi95").get<std::vector<double>>();
    s.draws = j.at("draws").get<std::vector<std::vector<double>>>();
    return s;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed summary JSON: ") + e.what());
  }
}

Json to_json(const StudyReport& r, const Stamp& stamp) {
  const auto& p = r.plan;
  Json plan{{"n_per_arm", p.n_per_arm},
            {"n_reps", p.n_reps},
            {"xgrid", p.xgrid},
            {"master_seed", p.master_seed},
            {"quadrature", {{"points", p.quad.n_points}, {"rule", rule_name(p.quad.rule)}}},
            {"mcmc",
             {{"burn_in", p.mcmc.burn_in},
              {"thin", p.mcmc.thin},
              {"n_keep", p.mcmc.n_keep},
              {"m_aux", p.mcmc.m_aux},
              {"n_predictive", p.mcmc.n_predictive}}}};
  Json settings = Json::array();
  for (const auto& s : r.settings) {
    Json failures = Json::array();
    for (const auto& f : s.failures) failures.push_back({{"rep", f.rep}, {"message", f.message}});
    settings.push_back({{"label", s.label},
                        {"grid", s.grid},
                        {"reps", s.reps},
                        {"failures", failures},
                        {"kappa", band_json(s.kappa)},
                        {"auc_upper", band_json(s.auc)}});
  }
  return Json{{"scenario", to_string(r.scenario)},
              {"scale_reading", to_string(r.reading)},
              {"config_hash", stamp.config_hash},
              {"master_seed", stamp.master_seed},
              {"all_succeeded", r.all_succeeded()},
              {"plan", plan},
              {"settings", settings}};
}

void write_stamp_comment(std::ostream& out, const Stamp& stamp) {
  out << "# config_hash=" << stamp.config_hash << " master_seed=" << stamp.master_seed << '\n';
}

void write_curves_csv(std::ostream& out, std::span<const AccuracySummary> summaries, const Stamp& stamp) {
  write_stamp_comment(out, stamp);
  out << "measure,x,mean,lo95,hi95\n";
  for (const auto& s : summaries) {
    for (std::size_t c = 0; c < s.mean.size(); ++c) {
      out << to_string(s.measure) << ',' << (s.grid.empty() ? std::string() : format_number(s.grid[c])) << ','
          << format_number(s.mean[c]) << ',' << format_number(s.lo95[c]) << ',' << format_number(s.hi95[c]) << '\n';
    }
  }
}

void write_study_csv(std::ostream& out, const StudyReport& r, const Stamp& stamp) {
  write_stamp_comment(out, stamp);
  out << "scenario,setting,x,statistic,kappa,auc_upper\n";
  for (const auto& s : r.settings) {
    const std::size_t cols = s.kappa.truth.size();
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string x = s.grid.empty() ? std::string() : format_number(s.grid[c]);
      auto row = [&](const char* stat, const std::vector<double>& k, const std::vector<double>& a) {
        if (k.empty()) return;
        out << to_string(r.scenario) << ",\"" << s.label << "\"," << x << ',' << stat << ',' << format_number(k[c])
            << ',' << format_number(a[c]) << '\n';
      };
      row("truth", s.kappa.truth, s.auc.truth);
      row("mc_mean", s.kappa.mc_mean, s.auc.mc_mean);
      row("p2_5", s.kappa.lo, s.auc.lo);
      row("p97_5", s.kappa.hi, s.auc.hi);
    }
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory for '" + path.string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace dxa
