#include "twave/classify.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "twave/errors.hpp"

namespace twave {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Classical:
      return "Classical";
    case Verdict::Undercompressive:
      return "Undercompressive";
    case Verdict::Unbounded:
      return "Unbounded";
    case Verdict::Undecided:
      return "Undecided";
  }
  return "?";
}

double default_tail_tol(const WaveConfig& cfg) { return 0.05 * std::abs(cfg.phi_minus - cfg.phi_plus); }

Classification classify(const Trajectory& traj, double tail_tol) {
  Classification c;
  if (traj.terminated == Termination::BlowDownDetected) {
    c.verdict = Verdict::Unbounded;
    c.xi_star = traj.xi_star;
    c.tail_mean = traj.phi.empty() ? 0.0 : traj.phi.back();
  } else {
    const std::size_t n = traj.size();
    const std::size_t window = std::max<std::size_t>(1, n / 10);
    double sum = 0.0;
    for (std::size_t k = n - window; k < n; ++k) sum += traj.phi[k];
    c.tail_mean = sum / static_cast<double>(window);
  }
  c.tail_dist_c = std::abs(c.tail_mean - traj.cfg.phi_c);
  c.tail_dist_plus = std::abs(c.tail_mean - traj.cfg.phi_plus);
  if (c.verdict == Verdict::Unbounded) return c;
  if (traj.terminated == Termination::NumericalFailure) {
    c.verdict = Verdict::Undecided;
    return c;
  }
  // With tail_tol < |phi_c - phi_+| / 2 at most one of these holds.
  if (c.tail_dist_c <= tail_tol && c.tail_dist_c < c.tail_dist_plus) {
    c.verdict = Verdict::Classical;
  } else if (c.tail_dist_plus <= tail_tol) {
    c.verdict = Verdict::Undercompressive;
  } else {
    c.verdict = Verdict::Undecided;
  }
  return c;
}

namespace {

double tail_tol_of(const WaveConfig& cfg, const ShootOptions& opts) {
  return opts.tail_tol > 0.0 ? opts.tail_tol : default_tail_tol(cfg);
}

}  // namespace

TauEvaluation evaluate_tau(const WaveConfig& cfg, double tau, const ShootOptions& opts, Trajectory* keep) {
  TauEvaluation ev;
  ev.tau = tau;
  const double tol = tail_tol_of(cfg, opts);
  Trajectory traj = integrate(cfg, tau, opts.integrate);
  ev.cls = classify(traj, tol);
  if (ev.cls.verdict == Verdict::Undecided || ev.cls.verdict == Verdict::Undercompressive) {
    IntegrateOptions longer = opts.integrate;
    longer.length *= 2.0;
    traj = integrate(cfg, tau, longer);
    ev.cls = classify(traj, tol);
    ev.extended = true;
  }
  if (keep) *keep = std::move(traj);
  return ev;
}

Bracket bracket_search(const WaveConfig& cfg, const ShootOptions& opts) {
  Bracket br;
  const int jobs = std::max(1, opts.jobs);

  auto run_batch = [&](const std::vector<int>& exps) {
    std::vector<TauEvaluation> out;
    if (jobs == 1) {
      for (int e : exps) out.push_back(evaluate_tau(cfg, std::ldexp(1.0, e), opts));
      return out;
    }
    std::vector<std::future<TauEvaluation>> fut;
    for (int e : exps) {
      fut.push_back(std::async(std::launch::async, [&, e] { return evaluate_tau(cfg, std::ldexp(1.0, e), opts); }));
    }
    for (auto& f : fut) out.push_back(f.get());
    return out;
  };

  std::optional<double> classical_below;
  std::optional<double> first_unbounded;

  // Upward from 2^0.
  for (int e = 0; e <= opts.scan_max_exp && !first_unbounded;) {
    std::vector<int> exps;
    for (int j = 0; j < jobs && e <= opts.scan_max_exp; ++j, ++e) exps.push_back(e);
    for (auto& ev : run_batch(exps)) {
      br.scanned.push_back(ev);
      if (first_unbounded) continue;
      if (ev.cls.verdict == Verdict::Classical) classical_below = ev.tau;
      if (ev.cls.verdict == Verdict::Unbounded) first_unbounded = ev.tau;
    }
  }
  if (!first_unbounded) throw NoBracket("no Unbounded verdict for tau up to 2^" + std::to_string(opts.scan_max_exp));
  if (classical_below) {
    br.tau_c = *classical_below;
    br.tau_u = *first_unbounded;
    return br;
  }

  // Everything from 2^0 up was unbounded or undecided: go down.
  double smallest_unbounded = *first_unbounded;
  for (int e = -1; e >= opts.scan_min_exp;) {
    std::vector<int> exps;
    for (int j = 0; j < jobs && e >= opts.scan_min_exp; ++j, --e) exps.push_back(e);
    for (auto& ev : run_batch(exps)) {
      br.scanned.push_back(ev);
      if (ev.cls.verdict == Verdict::Unbounded && !classical_below) smallest_unbounded = ev.tau;
      if (ev.cls.verdict == Verdict::Classical && !classical_below) classical_below = ev.tau;
    }
    if (classical_below) {
      br.tau_c = *classical_below;
      br.tau_u = smallest_unbounded;
      return br;
    }
  }
  throw NoBracket("no Classical verdict for tau down to 2^" + std::to_string(opts.scan_min_exp));
}

ShootResult bisect_tau(std::pair<double, double> bracket, const WaveConfig& cfg, const ShootOptions& opts) {
  auto [lo, hi] = bracket;
  if (!(lo > 0.0 && hi > lo)) throw InvalidConfig("bisection bracket must satisfy 0 < tau_c < tau_u");
  ShootResult res;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(opts.abs_tol, opts.stop_tol * mid)) break;
    Trajectory traj;
    const auto ev = evaluate_tau(cfg, mid, opts, opts.on_trajectory ? &traj : nullptr);
    if (opts.on_trajectory) opts.on_trajectory(it, mid, traj);
    res.history.emplace_back(mid, ev.cls.verdict);
    ++res.iterations;
    switch (ev.cls.verdict) {
      case Verdict::Classical:
        lo = mid;
        break;
      case Verdict::Unbounded:
        hi = mid;
        break;
      case Verdict::Undercompressive:
        res.undercompressive_hit = true;
        res.tau_star = mid;
        res.bracket_final = {lo, hi};
        return res;
      case Verdict::Undecided:
        throw BracketBroken("Undecided verdict at tau = " + std::to_string(mid) + " after domain extension");
    }
  }
  res.bracket_final = {lo, hi};
  res.tau_star = 0.5 * (lo + hi);
  return res;
}

ShootResult shoot(const WaveConfig& cfg, const ShootOptions& opts) {
  const auto br = bracket_search(cfg, opts);
  return bisect_tau({br.tau_c, br.tau_u}, cfg, opts);
}

MembershipReport membership_witness(const WaveConfig& cfg, double tau, const IntegrateOptions& opts, double tol) {
  IntegrateOptions orig = opts;
  orig.flux = FluxVariant::Original;
  IntegrateOptions mod = opts;
  mod.flux = FluxVariant::Modified;
  const auto a = integrate(cfg, tau, orig);
  const auto b = integrate(cfg, tau, mod);

  MembershipReport r;
  r.tau = tau;
  r.junction = cfg.junction();
  r.original = a.terminated;
  r.modified = b.terminated;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) r.sup_diff = std::max(r.sup_diff, std::abs(a.phi[k] - b.phi[k]));
  r.min_phi = *std::min_element(a.phi.begin(), a.phi.end());
  r.coincide = r.sup_diff <= tol && a.terminated == b.terminated && r.min_phi > r.junction;
  return r;
}

}  // namespace twave
