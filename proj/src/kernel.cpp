#include "twave/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twave/errors.hpp"

namespace twave {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kPanelTol = 1e-13;
constexpr unsigned kMaxDepth = 18;
constexpr double kFailTol = 1e-8;

}  // namespace

PoleData pole_data(double tau, double a, double alpha) {
  PoleData d;
  d.s1 = complex_pair_right(tau, 1.0, a, alpha);
  d.p = d.s1.real();
  d.q = d.s1.imag();
  const cdouble denom = 2.0 * tau * d.s1 + alpha * principal_pow(d.s1, alpha - 1.0);
  const cdouble R = -a / (d.s1 * denom);
  d.C1 = R.real();
  d.C2 = R.imag();
  return d;
}

KernelV::KernelV(double tau, double a, double alpha) : tau_(tau), a_(a), alpha_(alpha) {
  if (!(tau > 0.0 && a > 0.0)) throw InvalidConfig("kernel needs tau > 0 and a > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie in (0,1)");
  prefactor_ = a * std::sin(alpha * std::numbers::pi) / std::numbers::pi;
  pole_ = pole_data(tau, a, alpha);
}

double KernelV::moment(int m, double eta, double* err) const {
  const double cosap = std::cos(alpha_ * std::numbers::pi);
  const double sinap = std::sin(alpha_ * std::numbers::pi);
  // 1 / [(tau r^2 + a)^2 + 2 (tau r^2 + a) r^alpha cos(alpha pi) + r^(2 alpha)]
  auto ktilde = [&](double r, double ra) {
    const double x = tau_ * r * r + a_;
    return 1.0 / (x * x + 2.0 * x * ra * cosap + ra * ra);
  };

  double total = 0.0;
  double error = 0.0;
  auto add = [&](auto&& f, double lo, double hi) {
    double e = 0.0;
    total += GK::integrate(f, lo, hi, kMaxDepth, kPanelTol, &e);
    error += e;
  };

  // (0, 1] with u = r^alpha: r^(alpha-1) dr = du / alpha.
  auto inner = [&](double u) {
    const double r = std::pow(u, 1.0 / alpha_);
    return std::exp(-eta * r) * std::pow(r, m) * ktilde(r, u) / alpha_;
  };
  std::vector<double> cuts{0.0};
  for (double k : {1.0, 10.0, 100.0}) {
    if (eta > 0.0 && k / eta < 1.0) cuts.push_back(std::pow(k / eta, alpha_));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(1.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) add(inner, cuts[i], cuts[i + 1]);

  // [1, inf) on doubling panels. Since the denominator is at least
  // (tau r^2 + a)^2 sin^2(alpha pi), the remainder past R is bounded by
  // e^{-eta R} R^(alpha-4+m) / ((4-alpha-m) tau^2 sin^2(alpha pi)).
  auto outer = [&](double r) {
    return std::exp(-eta * r) * std::pow(r, m + alpha_ - 1.0) * ktilde(r, std::pow(r, alpha_));
  };
  auto remainder = [&](double R) {
    return std::exp(-eta * R) * std::pow(R, alpha_ - 4.0 + m) /
           ((4.0 - alpha_ - m) * tau_ * tau_ * sinap * sinap);
  };
  double R = 1.0;
  for (int panel = 0; panel < 1100; ++panel) {
    if (remainder(R) <= 1e-17 * std::max(1.0, std::abs(total))) break;
    add(outer, R, 2.0 * R);
    R *= 2.0;
  }
  error += remainder(R);

  if (!std::isfinite(total) || error > kFailTol * std::max(1.0, std::abs(total))) {
    throw QuadratureFailure("kernel moment " + std::to_string(m) + " at eta = " + std::to_string(eta) +
                            ": error estimate " + std::to_string(error));
  }
  if (err) *err = error;
  return total;
}

double KernelV::pole_term(int m, double eta) const {
  const cdouble R(pole_.C1, pole_.C2);
  cdouble sm(1.0, 0.0);
  for (int i = 0; i < m; ++i) sm *= pole_.s1;
  return 2.0 * (sm * R * std::exp(pole_.s1 * eta)).real();
}

double KernelV::derivative(int m, double eta) const {
  if (eta < 0.0) throw InvalidConfig("eta must be non-negative");
  if (eta == 0.0) return m == 0 ? 1.0 : (m == 1 ? 0.0 : -a_ / tau_);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * prefactor_ * moment(m, eta) + pole_term(m, eta);
}

double KernelV::v(double eta) const { return derivative(0, eta); }
double KernelV::v_prime(double eta) const { return derivative(1, eta); }
double KernelV::v_second(double eta) const { return derivative(2, eta); }

KernelEval KernelV::eval(double eta) const {
  if (eta < 0.0) throw InvalidConfig("eta must be non-negative");
  KernelEval r;
  r.eta = eta;
  r.tau = tau_;
  r.a = a_;
  if (eta == 0.0) {
    r.v = 1.0;
    r.v_prime = 0.0;
    r.v_second = -a_ / tau_;
    r.pole_part = pole_term(0, 0.0);
    r.integral_part = 1.0 - r.pole_part;
    return r;
  }
  double e0 = 0.0, e1 = 0.0, e2 = 0.0;
  const double i0 = moment(0, eta, &e0);
  const double i1 = moment(1, eta, &e1);
  const double i2 = moment(2, eta, &e2);
  r.integral_part = prefactor_ * i0;
  r.pole_part = pole_term(0, eta);
  r.v = r.integral_part + r.pole_part;
  r.v_prime = -prefactor_ * i1 + pole_term(1, eta);
  r.v_second = prefactor_ * i2 + pole_term(2, eta);
  r.quad_error_est = prefactor_ * std::max({e0, e1, e2});
  return r;
}

KernelEval eval_v(double eta, double tau, double a, double alpha) { return KernelV(tau, a, alpha).eval(eta); }

KernelDerivs eval_v_derivs(double eta, double tau, double a, double alpha) {
  const KernelV k(tau, a, alpha);
  return {k.v_prime(eta), k.v_second(eta)};
}

double far_field_constant(double a, double alpha) {
  return std::sin(alpha * std::numbers::pi) * std::tgamma(alpha) / (std::numbers::pi * a);
}

double inflection_seed(double tau, double alpha) {
  const double e = 1.0 / (2.0 - alpha);
  return std::pow(2.0 - alpha, e) * std::pow(tau, e);
}

double inflection_locate(double tau, double a, double alpha) {
  const KernelV k(tau, a, alpha);
  const double seed = inflection_seed(tau, alpha);
  constexpr int n = 96;
  const double lo_eta = seed / 32.0;
  const double ratio = std::pow(32.0 * 32.0, 1.0 / n);
  double x0 = lo_eta;
  double f0 = k.v_second(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo_eta * std::pow(ratio, i);
    const double f1 = k.v_second(x1);
    if (f0 < 0.0 && f1 > 0.0) {
      double lo = x0, hi = x1;
      for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (k.v_second(mid) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    if (f0 > 0.0 && f1 < 0.0) break;
    x0 = x1;
    f0 = f1;
  }
  throw NoSignChange("v'' has no negative-to-positive crossing near eta = " + std::to_string(seed));
}

std::vector<double> variation_of_constants(double phi0, double dphi0, std::span<const double> q_samples,
                                           double tau, double a, double alpha, double h) {
  if (!(h > 0.0)) throw InvalidConfig("grid spacing must be positive");
  const KernelV k(tau, a, alpha);
  const std::size_t n = q_samples.size();
  std::vector<double> v(n), vp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = static_cast<double>(i) * h;
    v[i] = k.v(eta);
    vp[i] = k.v_prime(eta);
  }
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double conv = 0.0;
    if (i > 0) {
      conv = 0.5 * (vp[0] * q_samples[i] + vp[i] * q_samples[0]);
      for (std::size_t j = 1; j < i; ++j) conv += vp[j] * q_samples[i - j];
      conv *= h;
    }
    psi[i] = phi0 * v[i] - (tau / a) * dphi0 * vp[i] - conv / a;
  }
  return psi;
}

}  // namespace twave
