#include "twave/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twave/charroots.hpp"
#include "twave/csv.hpp"
#include "twave/flux.hpp"
#include "twave/kernel.hpp"

namespace twave::cli {

using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Check:
      return "check";
    case Mode::Solve:
      return "solve";
    case Mode::Shoot:
      return "shoot";
    case Mode::Kernel:
      return "kernel";
    case Mode::Roots:
      return "roots";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become "--key value" tokens; '#' starts a comment.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") throw UsageError(path + ":" + std::to_string(lineno) + ": bad key");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

template <class T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option(name, target, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_shared(CLI::App* sub, RunSpec& s, std::string& config_path) {
  opt(sub, "--alpha", s.alpha, "fractional order in (0,1)")->capture_default_str();
  opt(sub, "--phi-minus", s.phi_minus, "left far-field state")->capture_default_str();
  opt(sub, "--phi-plus", s.phi_plus, "right far-field state")->capture_default_str();
  opt(sub, "--dx", s.integrate.dx, "grid step")->capture_default_str();
  opt(sub, "--xi-max", s.integrate.length, "domain length from the start of the grid")->capture_default_str();
  opt(sub, "--epsilon", s.integrate.epsilon, "initial perturbation amplitude")->capture_default_str();
  opt(sub, "--out", s.out, "output file");
  opt(sub, "--config", config_path, "key=value file; explicit flags override it");
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(name) + " must be positive");
}

void validate(RunSpec& s) {
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
  check_positive(s.integrate.dx, "--dx");
  check_positive(s.integrate.length, "--xi-max");
  if (!(s.integrate.epsilon > 0.0 && s.integrate.epsilon < 1.0)) throw UsageError("--epsilon must lie in (0,1)");
  if (s.tau) check_positive(*s.tau, "--tau");
  switch (s.mode) {
    case Mode::Shoot:
      check_positive(s.stop_tol, "--stop-tol");
      if (s.jobs < 1) throw UsageError("--jobs must be at least 1");
      break;
    case Mode::Kernel:
      check_positive(s.a, "--a");
      check_positive(s.eta_max, "--eta-max");
      if (s.points < 2) throw UsageError("--points must be at least 2");
      if (s.out.empty()) throw UsageError("kernel needs --out");
      break;
    case Mode::Roots:
      check_positive(s.a, "--a");
      check_positive(s.b, "--b");
      break;
    default:
      break;
  }
}

json admissibility_json(const AdmissibilityReport& r) {
  return {{"ordering_ok", r.ordering_ok},
          {"lax_violated", r.lax_violated},
          {"sum_positive", r.sum_positive},
          {"h_plus_minus_positive", r.h_plus_minus_positive},
          {"all", r.all()}};
}

std::vector<std::string> failed_conditions(const AdmissibilityReport& r) {
  std::vector<std::string> f;
  if (!r.ordering_ok) f.push_back("ordering phi_+ < phi_c < phi_-");
  if (!r.lax_violated) f.push_back("c < 3 min(phi_-^2, phi_+^2)");
  if (!r.sum_positive) f.push_back("phi_- + phi_+ > 0");
  if (!r.h_plus_minus_positive) f.push_back("H(phi_+) > H(phi_-)");
  return f;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "; " : "") + v[i];
  return s;
}

ShootOptions shoot_options(const RunSpec& spec) {
  ShootOptions o;
  o.integrate = spec.integrate;
  o.tail_tol = spec.tail_tol;
  o.stop_tol = spec.stop_tol;
  o.jobs = spec.jobs;
  return o;
}

int run_check(const RunSpec& spec, std::ostream& out) {
  const auto r = admissibility_report(spec.phi_minus, spec.phi_plus);
  json j = {{"mode", "check"},
            {"phi_minus", spec.phi_minus},
            {"phi_plus", spec.phi_plus},
            {"c", wave_speed(spec.phi_minus, spec.phi_plus)},
            {"phi_c", -(spec.phi_minus + spec.phi_plus)}};
  j["admissibility"] = admissibility_json(r);
  out << j.dump() << '\n';
  return r.all() ? kOk : kAdmissibility;
}

int run_solve(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  for (const auto& w : spec.warnings) err << "warning: " << w << '\n';
  const auto cfg = WaveConfig::make(spec.phi_minus, spec.phi_plus, spec.alpha);
  const auto traj = integrate(cfg, *spec.tau, spec.integrate);
  const double tol = spec.tail_tol > 0.0 ? spec.tail_tol : default_tail_tol(cfg);
  const auto cls = classify(traj, tol);
  if (!spec.out.empty()) write_atomic(spec.out, trajectory_csv(traj));

  double max_res = 0.0;
  for (double r : traj.energy_residual) max_res = std::max(max_res, std::abs(r));
  json j = {{"mode", "solve"},
            {"tau", *spec.tau},
            {"alpha", spec.alpha},
            {"flux", spec.integrate.flux == FluxVariant::Modified ? "modified" : "original"},
            {"terminated", to_string(traj.terminated)},
            {"verdict", to_string(cls.verdict)},
            {"tail_mean", cls.tail_mean},
            {"nodes", traj.size()},
            {"min_phi", *std::min_element(traj.phi.begin(), traj.phi.end())},
            {"max_energy_residual", max_res}};
  j["xi_star"] = traj.xi_star ? json(*traj.xi_star) : json(nullptr);
  if (!spec.out.empty()) j["out"] = spec.out;
  if (traj.terminated == Termination::NumericalFailure) {
    j["failure"] = traj.failure;
    out << j.dump() << '\n';
    err << "numerical failure: " << traj.failure << '\n';
    return kNumericalFailure;
  }
  out << j.dump() << '\n';
  return kOk;
}

int run_shoot(const RunSpec& spec, std::ostream& out) {
  const auto cfg = WaveConfig::make(spec.phi_minus, spec.phi_plus, spec.alpha);
  auto opts = shoot_options(spec);
  if (!spec.trajectories_dir.empty()) {
    std::filesystem::create_directories(spec.trajectories_dir);
    opts.on_trajectory = [&](int it, double, const Trajectory& t) {
      char name[32];
      std::snprintf(name, sizeof name, "iter_%03d.csv", it);
      write_atomic(std::filesystem::path(spec.trajectories_dir) / name, trajectory_csv(t));
    };
  }
  const auto br = bracket_search(cfg, opts);
  const auto res = bisect_tau({br.tau_c, br.tau_u}, cfg, opts);

  json hist = json::array();
  for (const auto& [t, v] : res.history) hist.push_back({{"tau", t}, {"verdict", to_string(v)}});
  json scan = json::array();
  for (const auto& ev : br.scanned) scan.push_back({{"tau", ev.tau}, {"verdict", to_string(ev.cls.verdict)}});
  json j = {{"mode", "shoot"},
            {"alpha", spec.alpha},
            {"phi_minus", spec.phi_minus},
            {"phi_plus", spec.phi_plus},
            {"dx", spec.integrate.dx},
            {"xi_max", spec.integrate.length},
            {"epsilon", spec.integrate.epsilon},
            {"stop_tol", spec.stop_tol},
            {"tau_star", res.tau_star},
            {"bracket", {res.bracket_final.first, res.bracket_final.second}},
            {"initial_bracket", {br.tau_c, br.tau_u}},
            {"iterations", res.iterations},
            {"undercompressive_hit", res.undercompressive_hit},
            {"scan", scan},
            {"history", hist}};
  if (!spec.out.empty()) write_atomic(spec.out, j.dump(2) + "\n");
  out << j.dump() << '\n';
  return kOk;
}

int run_kernel(const RunSpec& spec, std::ostream& out) {
  const KernelV k(*spec.tau, spec.a, spec.alpha);
  std::vector<KernelEval> rows;
  rows.reserve(static_cast<std::size_t>(spec.points));
  for (int i = 0; i < spec.points; ++i) {
    rows.push_back(k.eval(spec.eta_max * static_cast<double>(i) / static_cast<double>(spec.points - 1)));
  }
  write_atomic(spec.out, kernel_csv(rows, spec.alpha));
  json j = {{"mode", "kernel"},
            {"tau", *spec.tau},
            {"a", spec.a},
            {"alpha", spec.alpha},
            {"rows", rows.size()},
            {"s1_re", k.pole().p},
            {"s1_im", k.pole().q},
            {"out", spec.out}};
  out << j.dump() << '\n';
  return kOk;
}

int run_roots(const RunSpec& spec, std::ostream& out) {
  const auto left = left_roots(*spec.tau, spec.a, spec.b, spec.alpha);
  const auto right = right_roots(*spec.tau, spec.a, spec.b, spec.alpha);
  json j = {{"mode", "roots"},
            {"tau", *spec.tau},
            {"a", spec.a},
            {"b", spec.b},
            {"alpha", spec.alpha},
            {"lambda", *left.lambda},
            {"s1_re", right.s1->real()},
            {"s1_im", right.s1->imag()},
            {"residuals", {{"left", left.residual}, {"right", right.residual}}}};
  out << j.dump() << '\n';
  return kOk;
}

}  // namespace

RunSpec parse_args(const std::vector<std::string>& argv) {
  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  if (const auto cfg_path = find_config(args); cfg_path && !args.empty()) {
    auto tokens = read_config(*cfg_path);
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
  }

  RunSpec s;
  std::string config_path;
  std::string flux = "original";
  CLI::App app{"Travelling waves of a cubic conservation law with fractional dispersion", "twave"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "admissibility of the far-field pair");
  add_shared(check, s, config_path);

  auto* solve = app.add_subcommand("solve", "integrate one trajectory");
  add_shared(solve, s, config_path);
  opt(solve, "--tau", s.tau, "dispersion coefficient")->required();
  opt(solve, "--flux", flux, "original|modified")->check(CLI::IsMember({"original", "modified"}));
  opt(solve, "--floor", s.integrate.blowdown_floor, "blow-down threshold")->capture_default_str();
  opt(solve, "--cap-a", s.integrate.cap.A, "quartic coefficient of the cap")->capture_default_str();
  opt(solve, "--cap-b", s.integrate.cap.B, "cubic coefficient of the cap")->capture_default_str();
  opt(solve, "--tail-tol", s.tail_tol, "classification tolerance");

  auto* shoot = app.add_subcommand("shoot", "bisect tau for the undercompressive wave");
  add_shared(shoot, s, config_path);
  opt(shoot, "--stop-tol", s.stop_tol, "relative bracket width at which bisection stops")->capture_default_str();
  opt(shoot, "--tail-tol", s.tail_tol, "classification tolerance");
  opt(shoot, "--jobs", s.jobs, "concurrent solves in the bracket scan")->capture_default_str();
  opt(shoot, "--floor", s.integrate.blowdown_floor, "blow-down threshold")->capture_default_str();
  opt(shoot, "--trajectories", s.trajectories_dir, "directory for per-iteration trajectory CSVs");

  auto* kernel = app.add_subcommand("kernel", "tabulate v, v', v'' of the linearisation at phi_c");
  add_shared(kernel, s, config_path);
  opt(kernel, "--tau", s.tau, "dispersion coefficient")->required();
  opt(kernel, "--a", s.a, "decay constant |h'(phi_c)|")->capture_default_str();
  opt(kernel, "--eta-max", s.eta_max, "largest eta")->capture_default_str();
  opt(kernel, "--points", s.points, "number of rows")->capture_default_str();

  auto* roots = app.add_subcommand("roots", "characteristic roots");
  add_shared(roots, s, config_path);
  opt(roots, "--tau", s.tau, "dispersion coefficient")->required();
  opt(roots, "--a", s.a, "constant term")->capture_default_str();
  opt(roots, "--b", s.b, "coefficient of z^alpha")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), kOk);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), kOk);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (check->parsed()) s.mode = Mode::Check;
  if (solve->parsed()) s.mode = Mode::Solve;
  if (shoot->parsed()) s.mode = Mode::Shoot;
  if (kernel->parsed()) s.mode = Mode::Kernel;
  if (roots->parsed()) s.mode = Mode::Roots;
  s.integrate.flux = flux == "modified" ? FluxVariant::Modified : FluxVariant::Original;
  validate(s);

  if (s.mode == Mode::Solve || s.mode == Mode::Shoot) {
    const auto rep = admissibility_report(s.phi_minus, s.phi_plus);
    if (!rep.all()) {
      const std::string msg = "inadmissible far-field pair: " + join(failed_conditions(rep));
      if (s.mode == Mode::Shoot) throw AdmissibilityError(msg);
      s.warnings.push_back(msg);
    }
  }
  return s;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  switch (spec.mode) {
    case Mode::Check:
      return run_check(spec, out);
    case Mode::Solve:
      return run_solve(spec, out, err);
    case Mode::Shoot:
      return run_shoot(spec, out);
    case Mode::Kernel:
      return run_kernel(spec, out);
    case Mode::Roots:
      return run_roots(spec, out);
  }
  return kUsage;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  try {
    spec = parse_args(argv);
  } catch (const UsageError& e) {
    (e.code() == kOk ? out : err) << e.what() << '\n';
    return e.code();
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kAdmissibility;
  }
  try {
    return run(spec, out, err);
  } catch (const DegenerateStates& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace twave::cli
