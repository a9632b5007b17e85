#pragma once

// Shooting integrator for the first-order system
//
//   phi' = psi,
//   tau psi' = h(phi) - D^alpha[phi],
//
// started on the linearised far field phi ~ phi_- - e^{lambda (xi - xi_start)} eps
// and marched with Heun's predictor-corrector. The memory term is carried by
// HistoryGrid; its newest contribution is linear in psi'_k and is solved for
// exactly at every evaluation, so the stored psi' history is self-consistent.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twave/flux.hpp"
#include "twave/fracderiv.hpp"

namespace twave {

enum class FluxVariant { Original, Modified };

struct IntegrateOptions {
  double dx = 0.01;
  double length = 500.0;  // domain length measured from xi_start
  double blowdown_floor = -10.0;
  double epsilon = 1e-4;
  FluxVariant flux = FluxVariant::Original;
  CapParams cap{};
};

enum class Termination { ReachedXiMax, BlowDownDetected, NumericalFailure };

const char* to_string(Termination t);

struct InitialState {
  double xi_start = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  ExpTail tail;
};

/// Start of the numerical grid: lambda from the left characteristic, the
/// junction placed where the perturbation amplitude equals epsilon.
InitialState init_segment(const WaveConfig& cfg, double tau, double epsilon);

struct Trajectory {
  WaveConfig cfg;
  double tau = 0.0;
  IntegrateOptions opts;
  std::optional<ModifiedFlux> modified;  // set when the capped flux was used
  HistoryGrid grid;
  std::vector<double> phi;
  std::vector<double> dalpha;  // D^alpha[phi] at each node
  std::vector<double> energy_residual;
  Termination terminated = Termination::ReachedXiMax;
  std::optional<double> xi_star;
  std::string failure;

  std::size_t size() const { return phi.size(); }
  double xi(std::size_t k) const { return grid.xi(k); }
  double flux(double p) const;
  double potential(double p) const;
};

/// Heun stepper over a growing history. One instance per solve.
class HeunIntegrator {
 public:
  HeunIntegrator(const WaveConfig& cfg, double tau, const IntegrateOptions& opts);
  /// Starts from an explicit state instead of the linearised far field.
  HeunIntegrator(const WaveConfig& cfg, double tau, const IntegrateOptions& opts, const InitialState& init);

  /// Advances one node. Returns false (and records NumericalFailure) if a
  /// state component becomes non-finite.
  bool step();

  const Trajectory& trajectory() const { return traj_; }
  Trajectory release() { return std::move(traj_); }

  double phi() const { return traj_.phi.back(); }
  double psi() const { return traj_.grid.psi.back(); }
  std::size_t index() const { return traj_.phi.size() - 1; }

 private:
  void start(const InitialState& init);
  double rhs_flux(double p) const { return traj_.flux(p); }
  void record_energy(std::size_t k);

  Trajectory traj_;
  FracParams fp_;
  ProductWeights weights_;
  double tail_energy_ = 0.0;
  double memory_energy_ = 0.0;  // running int psi D^alpha over the grid
};

Trajectory integrate(const WaveConfig& cfg, double tau, const IntegrateOptions& opts = {});

struct BlowDownFit {
  double xi_star = 0.0;
  double c_fit = 0.0;  // |phi| (xi* - xi) -> sqrt(tau) c_fit
  double rms = 0.0;    // rms misfit of 1/phi
  std::size_t nodes = 0;
};

/// Least-squares fit of phi = -sqrt(tau) C / (xi* - xi), linear in 1/phi, over
/// the nodes with phi <= window_top (default blowdown_floor / 2).
BlowDownFit blowdown_diagnostic(const Trajectory& traj, std::optional<double> window_top = std::nullopt);

}  // namespace twave
