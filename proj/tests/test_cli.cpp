#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dxa/report_io.hpp"
#include "dxa/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DXA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dxa_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_sample(const fs::path& p, bool covariate) {
  dxa::Rng r(3);
  std::ofstream out(p);
  out << (covariate ? "y,d,age\n" : "y,d\n");
  for (int i = 0; i < 60; ++i) {
    const int d = i % 2;
    const double age = 40 + 40 * r.uniform();
    out << r.normal(d ? 1.5 : 0.0, 1.0) << ',' << d;
    if (covariate) out << ',' << age;
    out << '\n';
  }
}

const char* kShort = " --burn-in 20 --thin 1 --keep 20";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("affinity prints the measures of a binormal pair") {
    const auto r = run("affinity binormal --d 2,1 --nd 0,1");
    REQUIRE(r.code == 0);
    const auto j = dxa::Json::parse(r.out);
    CHECK(j.at("kappa").get<double>() == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK(j.at("kappa_closed_form").get<double>() == doctest::Approx(0.6065306597).epsilon(1e-9));
    CHECK(j.at("auc_upper").get<double>() == doctest::Approx(0.9213503964).epsilon(1e-8));
    CHECK(j.at("ovl").get<double>() <= j.at("kappa").get<double>());
  }

  TEST_CASE("affinity of the separation trap and of tabulated densities") {
    const auto trap = dxa::Json::parse(run("affinity septrap").out);
    CHECK(trap.at("kappa").get<double>() <= 1e-6);
    CHECK(trap.at("kappa_closed_form").is_null());

    const auto dir = scratch("grid");
    for (const char* name : {"a.csv", "b.csv"}) {
      std::ofstream out(dir / name);
      out << "y,f\n";
      for (int k = 0; k <= 200; ++k) {
        const double y = -8 + 0.08 * k;
        const double mu = name[0] == 'a' ? 1.0 : -1.0;
        out << y << ',' << std::exp(-0.5 * (y - mu) * (y - mu)) << '\n';
      }
    }
    const auto g = run("affinity grid --d " + (dir / "a.csv").string() + " --nd " + (dir / "b.csv").string());
    REQUIRE(g.code == 0);
    CHECK(dxa::Json::parse(g.out).at("kappa").get<double>() == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
  }

  TEST_CASE("exit codes") {
    CHECK(run("affinity cauchy --d 0,1 --nd 0,1").code == 2);
    CHECK(run("affinity binormal --d 0 --nd 0,1").code == 2);
    CHECK(run("affinity binormal --d 0,-1 --nd 0,1").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("fit /nonexistent/input.csv").code == 3);
    const auto dir = scratch("codes");
    std::ofstream(dir / "bad.csv") << "y,d\n1,1\n2,5\n";
    CHECK(run("fit " + (dir / "bad.csv").string()).code == 3);
    std::ofstream(dir / "bad.cfg") << "mcmc.nonsense = 1\n";
    CHECK(run("simulate U1 --config " + (dir / "bad.cfg").string()).code == 2);
    CHECK(run("simulate U7").code == 2);
  }

  TEST_CASE("fit writes the documented outputs and reruns byte-identically") {
    const auto dir = scratch("fit");
    write_sample(dir / "data.csv", true);
    const std::string base = "fit " + (dir / "data.csv").string() + " --x-col age --seed 5" + kShort;
    const auto a = run(base + " --out " + (dir / "a").string() + " --threads 1");
    const auto b = run(base + " --out " + (dir / "b").string() + " --threads 4");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    for (const char* suffix : {".summary.json", ".curves.csv", ".density.csv"}) {
      INFO(suffix);
      CHECK(slurp(dir / ("a" + std::string(suffix))) == slurp(dir / ("b" + std::string(suffix))));
    }
    const auto s = dxa::read_json_file(dir / "a.summary.json");
    CHECK(s.at("data").at("rows") == 60);
    CHECK(s.at("data").at("covariate").at("column") == "age");
    std::vector<std::string> measures;
    for (const auto& m : s.at("summaries")) measures.push_back(m.at("measure"));
    CHECK(measures == std::vector<std::string>{"kappa", "auc_upper", "auc_lower", "yi", "ovl", "kappa", "auc_upper"});
    const auto kx = s.at("summaries")[5];
    CHECK(kx.at("grid").size() == 21);
    const double lo = kx.at("grid").front(), hi = kx.at("grid").back();
    CHECK(lo >= 40.0);
    CHECK(hi <= 80.0);
    const auto curves = slurp(dir / "a.curves.csv");
    CHECK(curves.rfind("# config_hash=" + s.at("config_hash").get<std::string>(), 0) == 0);
    CHECK(a.out.find("a.summary.json") != std::string::npos);
  }

  TEST_CASE("simulate writes a study report") {
    const auto dir = scratch("sim");
    std::ofstream(dir / "tiny.cfg") << "study.n_per_arm = 20\nstudy.reps = 2\nmcmc.burn_in = 10\nmcmc.thin = 1\n"
                                       "mcmc.n_keep = 10\ngrid.points = 3\n";
    const auto r = run("simulate C2 --config " + (dir / "tiny.cfg").string() + " --out " + (dir / "c2").string());
    REQUIRE(r.code == 0);
    const auto j = dxa::read_json_file(dir / "c2.study.json");
    CHECK(j.at("scenario") == "C2");
    CHECK(j.at("plan").at("n_reps") == 2);
    CHECK(j.at("settings")[0].at("grid").size() == 3);
    CHECK(fs::exists(dir / "c2.study.csv"));
    CHECK(fs::exists(dir / "c2.provenance.json"));
    CHECK(dxa::read_json_file(dir / "c2.resolved-config.json").at("study").at("reps") == 2);
  }
}
