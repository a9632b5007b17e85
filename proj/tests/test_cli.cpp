#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "twave/cli.hpp"

using namespace twave;
using namespace twave::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "twave");
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path temp_dir() {
  const fs::path d = fs::temp_directory_path() / "twave_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("parse: shoot with explicit states") {
  const auto s = parse_args({"twave", "shoot", "--alpha", "0.9", "--phi-minus", "1", "--phi-plus", "-0.6"});
  CHECK(s.mode == Mode::Shoot);
  CHECK(s.alpha == 0.9);
  CHECK(s.phi_minus == 1.0);
  CHECK(s.phi_plus == -0.6);
  CHECK(s.integrate.dx == 0.01);
  CHECK(s.integrate.length == 500.0);
}

TEST_CASE("parse: xi-max, dx and epsilon map onto the integrator options") {
  const auto s = parse_args({"twave", "solve", "--tau", "2", "--dx", "0.02", "--xi-max", "50", "--epsilon", "1e-5"});
  CHECK(s.mode == Mode::Solve);
  REQUIRE(s.tau);
  CHECK(*s.tau == 2.0);
  CHECK(s.integrate.dx == 0.02);
  CHECK(s.integrate.length == 50.0);
  CHECK(s.integrate.epsilon == 1e-5);
}

TEST_CASE("usage and admissibility exit codes") {
  CHECK(run_cli({"shoot", "--phi-minus", "1", "--phi-plus", "-1"}).code == kAdmissibility);
  CHECK(run_cli({"solve"}).code == kUsage);
  CHECK(run_cli({"kernel", "--tau", "0.01"}).code == kUsage);
  CHECK(run_cli({"frobnicate"}).code == kUsage);
  CHECK(run_cli({"solve", "--tau", "1", "--alpha", "1.5"}).code == kUsage);
  CHECK(run_cli({"solve", "--tau", "1", "--phi-minus", "1", "--phi-plus", "1"}).code == kUsage);
  CHECK(run_cli({"--help"}).code == kOk);
  CHECK_THROWS_AS(parse_args({"twave", "shoot", "--phi-plus", "-1"}), AdmissibilityError);
}

TEST_CASE("check reports the admissibility flags") {
  const auto r = run_cli({"check"});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out)["admissibility"];
  CHECK(j["ordering_ok"] == true);
  CHECK(j["lax_violated"] == true);
  CHECK(j["sum_positive"] == true);
  CHECK(j["h_plus_minus_positive"] == true);
  CHECK(j["all"] == true);
  CHECK(run_cli({"check", "--phi-plus", "-1"}).code == kAdmissibility);
}

TEST_CASE("roots prints lambda and s1 with small residuals") {
  const auto r = run_cli({"roots", "--tau", "0.01", "--alpha", "0.5"});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lambda"].get<double>() > 0.0);
  CHECK(j["s1_re"].get<double>() < 0.0);
  CHECK(j["s1_im"].get<double>() > 0.0);
  CHECK(j["residuals"]["left"].get<double>() <= 1e-10);
  CHECK(j["residuals"]["right"].get<double>() <= 1e-10);
}

TEST_CASE("kernel writes the requested number of rows") {
  const fs::path out = temp_dir() / "kernel.csv";
  const auto r = run_cli({"kernel", "--tau", "0.01", "--alpha", "0.5", "--eta-max", "5", "--points", "100", "--out",
                          out.string()});
  REQUIRE(r.code == kOk);
  std::istringstream in(slurp(out));
  std::string line;
  int data = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      CHECK(line == "eta,v,v_prime,v_second");
      header_seen = true;
      continue;
    }
    ++data;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(data == 100);
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("solve: verdicts, JSON fields and byte-identical CSV output") {
  const fs::path d = temp_dir();
  const std::vector<std::string> base{"solve", "--tau", "0.5", "--xi-max", "40"};
  auto with_out = [&](const fs::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  const auto r1 = run_cli(with_out(d / "a.csv"));
  const auto r2 = run_cli(with_out(d / "b.csv"));
  REQUIRE(r1.code == kOk);
  REQUIRE(r2.code == kOk);
  const std::string a = slurp(d / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(d / "b.csv"));
  CHECK(a.rfind("# ", 0) == 0);
  CHECK(a.find("xi,phi,psi,dalpha,h,energy_residual") != std::string::npos);

  const auto j = nlohmann::json::parse(r1.out);
  CHECK(j["verdict"] == "Classical");
  CHECK(j["max_energy_residual"].get<double>() <= 1e-3);

  const auto u = nlohmann::json::parse(run_cli({"solve", "--tau", "50", "--xi-max", "100"}).out);
  CHECK(u["verdict"] == "Unbounded");
}

TEST_CASE("config file values are overridden by explicit flags") {
  const fs::path cfg = temp_dir() / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment\nalpha=0.5\ndx=0.05\ntau=3\n";
  }
  const auto s = parse_args({"twave", "solve", "--config", cfg.string(), "--alpha", "0.7"});
  CHECK(s.alpha == 0.7);
  CHECK(s.integrate.dx == 0.05);
  REQUIRE(s.tau);
  CHECK(*s.tau == 3.0);
}

TEST_CASE("shoot writes its summary and per-iteration trajectories") {
  const fs::path d = temp_dir() / "shoot";
  fs::remove_all(d);
  const fs::path json = temp_dir() / "shoot.json";
  const auto r = run_cli({"shoot", "--dx", "0.05", "--xi-max", "60", "--stop-tol", "1e-3", "--trajectories",
                          d.string(), "--out", json.string()});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(slurp(json));
  const double ts = j["tau_star"].get<double>();
  CHECK(ts > 2.0);
  CHECK(ts < 4.0);
  CHECK(j["bracket"][0].get<double>() <= ts);
  CHECK(j["bracket"][1].get<double>() >= ts);
  CHECK(fs::exists(d / "iter_001.csv"));
}
