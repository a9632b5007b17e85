#include "twave/integrator.hpp"

#include <cmath>
#include <utility>

#include "twave/charroots.hpp"
#include "twave/errors.hpp"

namespace twave {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedXiMax:
      return "ReachedXiMax";
    case Termination::BlowDownDetected:
      return "BlowDownDetected";
    case Termination::NumericalFailure:
      return "NumericalFailure";
  }
  return "?";
}

double Trajectory::flux(double p) const { return modified ? modified->eval(p) : h_eval(p, cfg); }

double Trajectory::potential(double p) const {
  return modified ? modified->potential(p) : potential_H(p, cfg);
}

InitialState init_segment(const WaveConfig& cfg, double tau, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidConfig("epsilon must lie in (0,1)");
  if (!(tau > 0.0)) throw InvalidConfig("tau must be positive");
  const double hp = cfg.h_prime_minus();
  if (!(hp > 0.0)) throw InvalidConfig("h'(phi_-) must be positive to leave phi_- along a decaying mode");
  const double lambda = positive_root_left(tau, 1.0, hp, cfg.alpha);
  InitialState s;
  s.xi_start = std::log(epsilon) / lambda;
  s.tail = {-1.0, lambda};  // phi - phi_- = -e^{lambda xi}, equal to -epsilon at xi_start
  s.phi = cfg.phi_minus - epsilon;
  s.psi = -epsilon * lambda;
  return s;
}

// ---------------------------------------------------------------------------

HeunIntegrator::HeunIntegrator(const WaveConfig& cfg, double tau, const IntegrateOptions& opts)
    : HeunIntegrator(cfg, tau, opts, init_segment(cfg, tau, opts.epsilon)) {}

HeunIntegrator::HeunIntegrator(const WaveConfig& cfg, double tau, const IntegrateOptions& opts,
                               const InitialState& init)
    : fp_(FracParams::make(cfg.alpha)), weights_(cfg.alpha) {
  if (!(opts.dx > 0.0)) throw InvalidConfig("dx must be positive");
  if (!(tau > 0.0)) throw InvalidConfig("tau must be positive");
  traj_.cfg = cfg;
  traj_.tau = tau;
  traj_.opts = opts;
  if (opts.flux == FluxVariant::Modified) traj_.modified = build_modified_flux(cfg, opts.cap);
  start(init);
}

void HeunIntegrator::start(const InitialState& init) {
  auto& g = traj_.grid;
  g.xi_start = init.xi_start;
  g.dx = traj_.opts.dx;
  g.tail = init.tail;
  g.psi = {init.psi};
  g.psi_prime = {0.0};
  traj_.phi = {init.phi};

  const auto split = caputo_split(g, 0, fp_, weights_);
  const double pp = (rhs_flux(init.phi) - split.known) / (traj_.tau + split.self_coeff);
  g.psi_prime[0] = pp;
  traj_.dalpha = {split.known + split.self_coeff * pp};

  // int_{-inf}^{xi_start} psi D^alpha over the linear tail.
  const double amp = init.tail.b * std::exp(init.tail.lambda * init.xi_start);
  tail_energy_ = 0.5 * amp * amp * std::pow(init.tail.lambda, fp_.alpha);
  memory_energy_ = 0.0;
  traj_.energy_residual.clear();
  record_energy(0);

  const std::size_t expected = static_cast<std::size_t>(traj_.opts.length / g.dx) + 2;
  g.psi.reserve(expected);
  g.psi_prime.reserve(expected);
  traj_.phi.reserve(expected);
  traj_.dalpha.reserve(expected);
  traj_.energy_residual.reserve(expected);
  weights_.reserve(expected);
}

void HeunIntegrator::record_energy(std::size_t k) {
  const auto& g = traj_.grid;
  if (k > 0) {
    memory_energy_ += 0.5 * g.dx * (g.psi[k - 1] * traj_.dalpha[k - 1] + g.psi[k] * traj_.dalpha[k]);
  }
  const double lhs = 0.5 * traj_.tau * g.psi[k] * g.psi[k] + tail_energy_ + memory_energy_;
  const double rhs = traj_.potential(traj_.phi[k]) - traj_.potential(traj_.cfg.phi_minus);
  traj_.energy_residual.push_back(lhs - rhs);
}

bool HeunIntegrator::step() {
  auto& g = traj_.grid;
  const std::size_t k = index();
  const double dx = g.dx;
  const double tau = traj_.tau;
  const double phi0 = traj_.phi[k];
  const double psi0 = g.psi[k];
  const double acc0 = g.psi_prime[k];

  // Everything in D^alpha at node k+1 except the psi'_{k+1} term is fixed.
  const auto split = caputo_split(g, k + 1, fp_, weights_);
  const double denom = tau + split.self_coeff;

  const double phi_pred = phi0 + dx * psi0;
  const double psi_pred = psi0 + dx * acc0;
  const double acc_pred = (rhs_flux(phi_pred) - split.known) / denom;

  const double phi1 = phi0 + 0.5 * dx * (psi0 + psi_pred);
  const double psi1 = psi0 + 0.5 * dx * (acc0 + acc_pred);
  const double acc1 = (rhs_flux(phi1) - split.known) / denom;

  if (!std::isfinite(phi1) || !std::isfinite(psi1) || !std::isfinite(acc1)) {
    traj_.terminated = Termination::NumericalFailure;
    traj_.failure = "non-finite state at xi = " + std::to_string(g.xi(k + 1));
    return false;
  }
  traj_.phi.push_back(phi1);
  g.psi.push_back(psi1);
  g.psi_prime.push_back(acc1);
  traj_.dalpha.push_back(split.known + split.self_coeff * acc1);
  record_energy(k + 1);
  return true;
}

Trajectory integrate(const WaveConfig& cfg, double tau, const IntegrateOptions& opts) {
  HeunIntegrator integ(cfg, tau, opts);
  const auto steps = static_cast<std::size_t>(std::llround(opts.length / opts.dx));
  for (std::size_t s = 0; s < steps; ++s) {
    if (!integ.step()) return integ.release();
    if (integ.phi() < opts.blowdown_floor) {
      Trajectory t = integ.release();
      t.terminated = Termination::BlowDownDetected;
      try {
        t.xi_star = blowdown_diagnostic(t).xi_star;
      } catch (const InsufficientData&) {
        t.xi_star.reset();
      }
      return t;
    }
  }
  Trajectory t = integ.release();
  t.terminated = Termination::ReachedXiMax;
  return t;
}

BlowDownFit blowdown_diagnostic(const Trajectory& traj, std::optional<double> window_top) {
  if (traj.terminated != Termination::BlowDownDetected) {
    throw InsufficientData("trajectory did not blow down");
  }
  const double top = window_top.value_or(traj.opts.blowdown_floor / 2.0);
  // Nodes of the final monotone descent below `top`.
  std::size_t first = traj.size();
  while (first > 0 && traj.phi[first - 1] <= top) --first;
  const std::size_t n = traj.size() - first;
  if (n < 10) throw InsufficientData("fewer than 10 nodes in the blow-down window");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double x0 = traj.xi(first);
  for (std::size_t k = first; k < traj.size(); ++k) {
    const double x = traj.xi(k) - x0;
    const double y = 1.0 / traj.phi[k];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nd = static_cast<double>(n);
  const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / nd;
  double ss = 0.0;
  for (std::size_t k = first; k < traj.size(); ++k) {
    const double r = 1.0 / traj.phi[k] - (slope * (traj.xi(k) - x0) + icpt);
    ss += r * r;
  }
  BlowDownFit fit;
  // 1/phi = (xi - xi*) / (sqrt(tau) C)
  fit.xi_star = x0 - icpt / slope;
  fit.c_fit = 1.0 / (slope * std::sqrt(traj.tau));
  fit.rms = std::sqrt(ss / nd);
  fit.nodes = n;
  return fit;
}

}  // namespace twave
