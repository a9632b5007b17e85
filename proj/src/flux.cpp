#include "twave/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twave/errors.hpp"

namespace twave {

WaveConfig WaveConfig::make(double phi_minus, double phi_plus, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidConfig("fractional order alpha must lie in (0,1)");
  }
  WaveConfig cfg;
  cfg.phi_minus = phi_minus;
  cfg.phi_plus = phi_plus;
  cfg.c = wave_speed(phi_minus, phi_plus);
  cfg.phi_c = -(phi_minus + phi_plus);
  cfg.alpha = alpha;
  cfg.A = cfg.c * phi_minus - phi_minus * phi_minus * phi_minus;
  return cfg;
}

double WaveConfig::h_prime_minus() const { return h_prime(phi_minus, *this); }

double WaveConfig::a_center() const { return -h_prime(phi_c, *this); }

double WaveConfig::junction() const { return -std::sqrt(c / 3.0); }

double wave_speed(double phi_minus, double phi_plus) {
  if (phi_minus == phi_plus) {
    throw DegenerateStates("far-field states coincide; no shock speed");
  }
  return phi_plus * phi_plus + phi_minus * phi_minus + phi_minus * phi_plus;
}

double h_eval(double phi, const WaveConfig& cfg) {
  const double pm = cfg.phi_minus;
  return -cfg.c * (phi - pm) + phi * phi * phi - pm * pm * pm;
}

double h_prime(double phi, const WaveConfig& cfg) { return -cfg.c + 3.0 * phi * phi; }

double potential_H(double phi, const WaveConfig& cfg) {
  const double p2 = phi * phi;
  return -cfg.c * p2 / 2.0 + p2 * p2 / 4.0 + cfg.A * phi;
}

AdmissibilityReport admissibility_report(double phi_minus, double phi_plus) {
  AdmissibilityReport r;
  if (phi_minus == phi_plus) return r;
  const double c = wave_speed(phi_minus, phi_plus);
  const double phi_c = -(phi_minus + phi_plus);
  r.ordering_ok = phi_plus < phi_c && phi_c < phi_minus;
  r.lax_violated = c < 3.0 * std::min(phi_minus * phi_minus, phi_plus * phi_plus);
  r.sum_positive = phi_minus + phi_plus > 0.0;
  r.h_plus_minus_positive = c < phi_minus * phi_minus;
  return r;
}

// ---------------------------------------------------------------------------
// modified flux

double ModifiedFlux::cap(double phi) const {
  const auto& q = quartic;
  return (((q[0] * phi + q[1]) * phi + q[2]) * phi + q[3]) * phi + q[4];
}

double ModifiedFlux::cap_prime(double phi) const {
  const auto& q = quartic;
  return ((4.0 * q[0] * phi + 3.0 * q[1]) * phi + 2.0 * q[2]) * phi + q[3];
}

double ModifiedFlux::cap_second(double phi) const {
  const auto& q = quartic;
  return (12.0 * q[0] * phi + 6.0 * q[1]) * phi + 2.0 * q[2];
}

double ModifiedFlux::eval(double phi) const {
  if (phi >= junction) return h_eval(phi, base);
  return cap(phi);
}

double ModifiedFlux::potential(double phi) const {
  if (phi >= junction) return potential_H(phi, base);
  const auto& q = quartic;
  auto prim = [&](double x) {
    return ((((q[0] / 5.0 * x + q[1] / 4.0) * x + q[2] / 3.0) * x + q[3] / 2.0) * x + q[4]) * x;
  };
  return potential_H(junction, base) + prim(phi) - prim(junction);
}

namespace {

// Matching at x = j: P(j) = h(j), P'(j) = 0, P''(j) = h''(j) = 6j.
std::array<double, 5> match_quartic(double A, double B, double j, double hj) {
  const double C = (6.0 * j - 12.0 * A * j * j - 6.0 * B * j) / 2.0;
  const double D = -(4.0 * A * j * j * j + 3.0 * B * j * j + 2.0 * C * j);
  const double E = hj - (((A * j + B) * j + C) * j + D) * j;
  return {A, B, C, D, E};
}

// Minimum of the quartic over (-inf, j]. Critical points are bracketed by a
// sign scan of P' inside the Cauchy bound of its roots.
double cap_minimum(const ModifiedFlux& mf) {
  const auto& q = mf.quartic;
  const double lead = 4.0 * q[0];
  const double bound =
      1.0 + std::max({std::abs(3.0 * q[1] / lead), std::abs(2.0 * q[2] / lead), std::abs(q[3] / lead)});
  const double lo = std::min(-bound, mf.junction) - 1.0;
  const double hi = mf.junction;
  double best = mf.cap(hi);
  constexpr int kScan = 20000;
  double x0 = lo;
  double d0 = mf.cap_prime(x0);
  for (int i = 1; i <= kScan; ++i) {
    const double x1 = lo + (hi - lo) * i / kScan;
    const double d1 = mf.cap_prime(x1);
    best = std::min(best, mf.cap(x1));
    if ((d0 < 0.0 && d1 >= 0.0) || (d0 > 0.0 && d1 <= 0.0)) {
      double a = x0, b = x1, da = d0;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double dm = mf.cap_prime(m);
        if ((dm < 0.0) == (da < 0.0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      best = std::min(best, mf.cap(0.5 * (a + b)));
    }
    x0 = x1;
    d0 = d1;
  }
  return best;
}

}  // namespace

ModifiedFlux build_modified_flux(const WaveConfig& cfg, CapParams params) {
  if (!(cfg.c > 0.0)) throw InvalidConfig("modified flux needs a positive wave speed");
  if (!(params.A > 0.0)) throw CapNotPositive("quartic coefficient A must be positive");

  ModifiedFlux mf;
  mf.base = cfg;
  mf.requested = params;
  mf.junction = cfg.junction();
  const double hj = h_eval(mf.junction, cfg);

  double B = params.B;
  bool positive = false;
  for (int k = 0; k <= 60; ++k) {
    mf.quartic = match_quartic(params.A, B, mf.junction, hj);
    // Strictly below the junction; P(j) = h(j) > 0 under the ordering assumption.
    if (hj > 0.0 && cap_minimum(mf) > 0.0) {
      positive = true;
      break;
    }
    if (!(B < 0.0)) break;
    B *= 2.0;
  }
  if (!positive) {
    throw CapNotPositive("no cubic coefficient in the search range gives a positive cap");
  }

  // phi_bar: H~(phi) - H~(phi_-) is increasing on phi < phi_c, positive at phi_c.
  const double target = mf.potential(cfg.phi_minus);
  double lo = -10.0 * std::abs(cfg.phi_minus);
  double hi = cfg.phi_c;
  while (mf.potential(lo) - target > 0.0 && lo > -1e8) lo *= 2.0;
  while (hi - lo > 1e-12) {
    const double m = 0.5 * (lo + hi);
    if (mf.potential(m) - target > 0.0) {
      hi = m;
    } else {
      lo = m;
    }
  }
  mf.phi_bar = 0.5 * (lo + hi);
  return mf;
}

TaylorBounds taylor_bound_constants(const WaveConfig& cfg) {
  const double pm = cfg.phi_minus;
  const double pp = cfg.phi_plus;
  return {-2.0 * (pm + pp) * pp / (pm * pm), 2.0};
}

}  // namespace twave
