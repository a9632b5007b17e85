#pragma once

// Classification of shooting trajectories and bisection in tau for the
// undercompressive connection phi_- -> phi_+.

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "twave/integrator.hpp"

namespace twave {

enum class Verdict { Classical, Undercompressive, Unbounded, Undecided };

const char* to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Undecided;
  double tail_mean = 0.0;  // mean of phi over the last 10% of the nodes
  double tail_dist_c = 0.0;
  double tail_dist_plus = 0.0;
  std::optional<double> xi_star;
};

/// Default tail tolerance, 5% of the jump |phi_- - phi_+|.
double default_tail_tol(const WaveConfig& cfg);

Classification classify(const Trajectory& traj, double tail_tol);

struct ShootOptions {
  IntegrateOptions integrate{};
  double tail_tol = -1.0;   // <= 0 selects default_tail_tol
  double stop_tol = 1e-12;  // relative bracket width
  double abs_tol = 1e-14;
  int max_iterations = 60;
  int scan_min_exp = -20;
  int scan_max_exp = 20;
  int jobs = 1;  // concurrent solves during the bracket scan
  /// Called with (iteration, tau, trajectory) for every bisection solve.
  std::function<void(int, double, const Trajectory&)> on_trajectory;
};

struct TauEvaluation {
  double tau = 0.0;
  Classification cls;
  bool extended = false;  // domain was doubled to resolve a slow tail
};

/// Integrates and classifies at one tau. Undecided or Undercompressive
/// verdicts are retried once on a doubled domain.
TauEvaluation evaluate_tau(const WaveConfig& cfg, double tau, const ShootOptions& opts,
                           Trajectory* keep = nullptr);

struct Bracket {
  double tau_c = 0.0;  // Classical
  double tau_u = 0.0;  // Unbounded
  std::vector<TauEvaluation> scanned;
};

/// Scans tau = 2^k until a Classical value sits below an Unbounded one.
Bracket bracket_search(const WaveConfig& cfg, const ShootOptions& opts);

struct ShootResult {
  double tau_star = 0.0;
  std::pair<double, double> bracket_final{0.0, 0.0};
  int iterations = 0;
  std::vector<std::pair<double, Verdict>> history;
  bool undercompressive_hit = false;  // a midpoint itself settled near phi_+
};

/// Bisection on a (Classical, Unbounded) bracket until the width is below
/// max(abs_tol, stop_tol * tau) or max_iterations is reached.
ShootResult bisect_tau(std::pair<double, double> bracket, const WaveConfig& cfg, const ShootOptions& opts);

/// bracket_search followed by bisect_tau.
ShootResult shoot(const WaveConfig& cfg, const ShootOptions& opts);

struct MembershipReport {
  double tau = 0.0;
  double sup_diff = 0.0;        // max |phi_original - phi_modified| over common nodes
  double min_phi = 0.0;         // minimum of the original-flux profile
  double junction = 0.0;        // -sqrt(c/3)
  Termination original = Termination::ReachedXiMax;
  Termination modified = Termination::ReachedXiMax;
  bool coincide = false;        // sup_diff <= tol, same termination, min_phi > junction
};

/// Integrates with h and with the capped flux at the same tau and compares.
MembershipReport membership_witness(const WaveConfig& cfg, double tau, const IntegrateOptions& opts,
                                    double tol = 1e-6);

}  // namespace twave
