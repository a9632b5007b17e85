#pragma once

// Fundamental solution v(eta; tau) of the linearisation at phi_c,
//
//   tau v'' + D_0^alpha[v] + a v = 0,   v(0) = 1,  v'(0) = 0,
//
// written as the Laplace inversion of (tau s + s^(alpha-1)) / (tau s^2 + s^alpha + a):
// a branch-cut integral along the negative real axis plus the residues at the
// complex pair s1, conj(s1).
//
//   v(eta) = (a sin(alpha pi) / pi) int_0^inf e^{-eta r} K(r) dr
//          + 2 Re( e^{s1 eta} R ),
//   K(r)   = r^(alpha-1) / [(tau r^2 + a)^2 + 2 (tau r^2 + a) r^alpha cos(alpha pi) + r^(2 alpha)],
//   R      = -a / (s1 (2 tau s1 + alpha s1^(alpha-1))).

#include <span>
#include <vector>

#include "twave/charroots.hpp"

namespace twave {

struct PoleData {
  cdouble s1;
  double p = 0.0;   // Re s1 < 0
  double q = 0.0;   // Im s1 > 0
  double C1 = 0.0;  // Re R
  double C2 = 0.0;  // Im R; pole part = 2 e^{p eta} (C1 cos q eta - C2 sin q eta)
};

PoleData pole_data(double tau, double a, double alpha);

struct KernelEval {
  double eta = 0.0;
  double tau = 0.0;
  double a = 0.0;
  double v = 0.0;
  double v_prime = 0.0;
  double v_second = 0.0;
  double integral_part = 0.0;  // branch-cut contribution to v, prefactor included
  double pole_part = 0.0;      // residue contribution to v
  double quad_error_est = 0.0; // summed quadrature error and truncation bound
};

/// Evaluator for one (tau, a, alpha), caching the pole data.
class KernelV {
 public:
  KernelV(double tau, double a, double alpha);

  double tau() const { return tau_; }
  double a() const { return a_; }
  double alpha() const { return alpha_; }
  const PoleData& pole() const { return pole_; }

  KernelEval eval(double eta) const;
  double v(double eta) const;
  double v_prime(double eta) const;
  double v_second(double eta) const;

  /// e^{-eta r} r^m K(r) integrated over (0, inf); error estimate in `err`.
  double moment(int m, double eta, double* err = nullptr) const;
  /// Derivative of order m of the residue term.
  double pole_term(int m, double eta) const;

 private:
  double derivative(int m, double eta) const;

  double tau_;
  double a_;
  double alpha_;
  double prefactor_;  // a sin(alpha pi) / pi
  PoleData pole_;
};

/// Full evaluation at eta >= 0. eta = 0 returns the analytic limits
/// v = 1, v' = 0, v'' = -a / tau. Throws QuadratureFailure when the error
/// estimate exceeds 1e-8 relative to max(1, |integral|).
KernelEval eval_v(double eta, double tau, double a, double alpha);

struct KernelDerivs {
  double v_prime = 0.0;
  double v_second = 0.0;
};

KernelDerivs eval_v_derivs(double eta, double tau, double a, double alpha);

/// Large-eta limit of eta^alpha v(eta): sin(alpha pi) Gamma(alpha) / (pi a).
double far_field_constant(double a, double alpha);

/// Seed (2 - alpha)^(1/(2-alpha)) tau^(1/(2-alpha)) for the inflection point.
double inflection_seed(double tau, double alpha);

/// First zero of v'' where it changes from negative to positive, searched on a
/// geometric grid around inflection_seed and refined by bisection.
/// Throws NoSignChange when no such crossing exists.
double inflection_locate(double tau, double a, double alpha);

/// Solution of tau psi'' + D_0^alpha[psi] + a psi = Q with psi(0) = phi0,
/// psi'(0) = dphi0 on the uniform grid eta_k = k h:
///
///   psi(eta) = phi0 v(eta) - (tau/a) dphi0 v'(eta) - (1/a) int_0^eta v'(y) Q(eta - y) dy,
///
/// with the convolution done by the trapezoid rule.
std::vector<double> variation_of_constants(double phi0, double dphi0, std::span<const double> q_samples,
                                           double tau, double a, double alpha, double h);

}  // namespace twave
