#pragma once

// Roots of the characteristic functions of the linearised travelling-wave
// equation,
//
//   left:   tau z^2 + b z^alpha - a      (linearisation at phi_-)
//   right:  tau z^2 + b z^alpha + a      (linearisation at phi_c)
//
// with a, b > 0 and z^alpha taken on the principal branch arg z in (-pi, pi).

#include <complex>
#include <optional>

namespace twave {

using cdouble = std::complex<double>;

/// z^alpha on the principal branch, exp(alpha (ln|z| + i arg z)).
cdouble principal_pow(cdouble z, double alpha);

enum class RootKind { Left, Right };

struct CharRoots {
  RootKind kind = RootKind::Left;
  double tau = 0.0;
  double a = 0.0;
  double b = 1.0;
  double alpha = 0.5;
  std::optional<double> lambda;  // positive real root (Left)
  std::optional<cdouble> s1;     // root with Im > 0 (Right)
  // Worst residual scaled by the size of the terms,
  // |f(z)| / (tau|z|^2 + b|z|^alpha + a).
  double residual = 0.0;
};

double left_characteristic(double z, double tau, double b, double a, double alpha);
cdouble right_characteristic(cdouble z, double tau, double b, double a, double alpha);

/// Unique lambda > 0 with tau lambda^2 + b lambda^alpha = a. tau = 0 is
/// accepted and returns (a/b)^(1/alpha).
double positive_root_left(double tau, double b, double a, double alpha);

/// Two-term small-tau expansion of the upper root of the right characteristic.
cdouble small_tau_expansion_right(double tau, double b, double a, double alpha);

struct RightRootOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// Root s1 (Im > 0, Re < 0) of the right characteristic; conj(s1) is the other.
cdouble complex_pair_right(double tau, double b, double a, double alpha,
                           RightRootOptions opts = {});

/// Root families with their residuals, as reported by the `roots` command.
CharRoots left_roots(double tau, double a, double b, double alpha);
CharRoots right_roots(double tau, double a, double b, double alpha);

double scaled_residual_left(double z, double tau, double b, double a, double alpha);
double scaled_residual_right(cdouble z, double tau, double b, double a, double alpha);

}  // namespace twave
