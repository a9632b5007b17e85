#pragma once

// Cubic flux of the travelling-wave problem
//
//   tau*phi'' + D^alpha[phi] = h(phi),   h(phi) = -c(phi - phi_-) + phi^3 - phi_-^3,
//
// its primitive H, the capped flux used to certify classical profiles, and the
// admissibility predicates on the far-field pair (phi_-, phi_+).

#include <array>

namespace twave {

/// Far-field states, wave speed and fractional order of one travelling wave.
struct WaveConfig {
  double phi_minus = 0.0;
  double phi_plus = 0.0;
  double phi_c = 0.0;  // -(phi_- + phi_+), the middle root of h
  double c = 0.0;      // Rankine-Hugoniot speed
  double alpha = 0.5;
  double A = 0.0;      // linear coefficient of H: c*phi_- - phi_-^3

  /// Builds a config from the two far-field states. Throws DegenerateStates
  /// when phi_- == phi_+ and InvalidConfig when alpha is outside (0,1).
  static WaveConfig make(double phi_minus, double phi_plus, double alpha);

  /// h'(phi_-), the growth rate entering the left characteristic equation.
  double h_prime_minus() const;
  /// |h'(phi_c)|, the decay constant of the linearisation at phi_c.
  double a_center() const;
  /// Local maximum of h, -sqrt(c/3).
  double junction() const;
};

double wave_speed(double phi_minus, double phi_plus);

double h_eval(double phi, const WaveConfig& cfg);
double h_prime(double phi, const WaveConfig& cfg);
double potential_H(double phi, const WaveConfig& cfg);

struct AdmissibilityReport {
  bool ordering_ok = false;            // phi_+ < phi_c < phi_-
  bool lax_violated = false;           // c < 3 min(phi_-^2, phi_+^2)
  bool sum_positive = false;           // phi_- + phi_+ > 0
  bool h_plus_minus_positive = false;  // c < phi_-^2, i.e. H(phi_+) > H(phi_-)

  bool all() const {
    return ordering_ok && lax_violated && sum_positive && h_plus_minus_positive;
  }
};

AdmissibilityReport admissibility_report(double phi_minus, double phi_plus);

struct CapParams {
  double A = 1.0;    // quartic coefficient, must be > 0
  double B = -10.0;  // cubic coefficient; more negative makes the cap larger
};

/// h with the branch below its local maximum -sqrt(c/3) replaced by a
/// positive quartic P_c that matches h to second order at the junction.
/// The only zeros of the result are phi_c and phi_-.
struct ModifiedFlux {
  WaveConfig base;
  double junction = 0.0;
  std::array<double, 5> quartic{};  // A, B, C, D, E of A x^4 + B x^3 + C x^2 + D x + E
  double phi_bar = 0.0;             // zero of H~(phi) - H~(phi_-) below phi_c
  CapParams requested{};            // cap parameters supplied by the caller

  double eval(double phi) const;
  double cap(double phi) const;
  double cap_prime(double phi) const;
  double cap_second(double phi) const;
  double potential(double phi) const;
};

/// Solves the C^2 matching constraints for C, D, E given (A, B). If the cap
/// is not positive on phi <= junction, the cubic coefficient is doubled
/// (B < 0 only) until it is or the 2^60 bound is hit; then CapNotPositive.
ModifiedFlux build_modified_flux(const WaveConfig& cfg, CapParams params = {});

struct TaylorBounds {
  double C_h = 0.0;
  double C_H = 2.0;
};

/// Constants of 2 phi^3 <= h(phi) < C_h phi^3 and H(phi)-H(phi_-) < C_H phi^4
/// on phi <= -phi_-.
TaylorBounds taylor_bound_constants(const WaveConfig& cfg);

}  // namespace twave
