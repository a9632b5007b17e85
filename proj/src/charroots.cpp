#include "twave/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "twave/errors.hpp"

namespace twave {

cdouble principal_pow(cdouble z, double alpha) {
  if (z == cdouble(0.0, 0.0)) return {0.0, 0.0};
  const double r = std::abs(z);
  const double theta = std::arg(z);
  return std::polar(std::pow(r, alpha), alpha * theta);
}

double left_characteristic(double z, double tau, double b, double a, double alpha) {
  return tau * z * z + b * std::pow(z, alpha) - a;
}

cdouble right_characteristic(cdouble z, double tau, double b, double a, double alpha) {
  return tau * z * z + b * principal_pow(z, alpha) + a;
}

double scaled_residual_left(double z, double tau, double b, double a, double alpha) {
  const double scale = tau * z * z + b * std::pow(z, alpha) + a;
  return std::abs(left_characteristic(z, tau, b, a, alpha)) / scale;
}

double scaled_residual_right(cdouble z, double tau, double b, double a, double alpha) {
  const double m = std::abs(z);
  const double scale = tau * m * m + b * std::pow(m, alpha) + a;
  return std::abs(right_characteristic(z, tau, b, a, alpha)) / scale;
}

double positive_root_left(double tau, double b, double a, double alpha) {
  if (!(a > 0.0 && b > 0.0 && tau >= 0.0)) {
    throw InvalidConfig("left characteristic needs a, b > 0 and tau >= 0");
  }
  if (tau == 0.0) return std::pow(a / b, 1.0 / alpha);

  auto f = [&](double z) { return left_characteristic(z, tau, b, a, alpha); };
  double lo = 0.0;
  double hi = std::max(2.0 * std::pow(a / b, 1.0 / alpha), 2.0 * std::sqrt(a / tau));
  if (!(f(hi) > 0.0)) throw NoConvergence("left characteristic: bracket failed");

  // Bisection to a coarse tolerance, then Newton on the monotone branch.
  int it = 0;
  while (hi - lo > 1e-8 * hi && it++ < 400) {
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (fm > 0.0) {
      hi = m;
    } else {
      lo = m;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int k = 0; k < 50; ++k) {
    const double fz = f(z);
    const double dz = 2.0 * tau * z + alpha * b * std::pow(z, alpha - 1.0);
    const double step = fz / dz;
    const double next = z - step;
    if (!(next > lo && next < hi)) break;
    z = next;
    if (std::abs(step) <= 1e-15 * z) break;
  }
  if (scaled_residual_left(z, tau, b, a, alpha) > 1e-12) {
    throw NoConvergence("left characteristic: Newton polish did not converge");
  }
  return z;
}

cdouble small_tau_expansion_right(double tau, double b, double a, double alpha) {
  using std::numbers::pi;
  const cdouble i(0.0, 1.0);
  const double e1 = 1.0 / (alpha - 2.0);
  const cdouble lead_unit = std::pow(b, e1) * std::exp(i * pi * e1);
  const cdouble denom = 2.0 * lead_unit +
                        alpha * std::pow(b, (alpha - 1.0) / (alpha - 2.0)) *
                            std::exp(i * pi * (alpha - 1.0) / (alpha - 2.0));
  // The expression above has arg close to -pi/(2-alpha); its conjugate is the
  // member of the pair in the upper half plane.
  return std::conj(lead_unit * std::pow(tau, -1.0 / (2.0 - alpha)) -
                   a / denom * std::pow(tau, -(1.0 - alpha) / (2.0 - alpha)));
}

namespace {

bool newton_right(cdouble z, double tau, double b, double a, double alpha, const RightRootOptions& opts,
                  cdouble& out) {
  for (int k = 0; k < opts.max_iterations; ++k) {
    const cdouble f = right_characteristic(z, tau, b, a, alpha);
    if (scaled_residual_right(z, tau, b, a, alpha) <= 0.01 * opts.tolerance) break;
    const cdouble df = 2.0 * tau * z + alpha * b * principal_pow(z, alpha - 1.0);
    if (std::abs(df) == 0.0) return false;
    cdouble step = f / df;
    // Damp steps that would cross the cut on the negative real axis.
    int damp = 0;
    while (true) {
      const cdouble next = z - step;
      const bool crosses = next.imag() <= 0.0;
      if (!crosses) {
        z = next;
        break;
      }
      if (++damp > 60) throw BranchViolation("Newton iterate cannot stay off the branch cut");
      step *= 0.5;
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(step) <= 1e-16 * std::abs(z)) break;
  }
  out = z;
  return scaled_residual_right(z, tau, b, a, alpha) <= opts.tolerance;
}

}  // namespace

cdouble complex_pair_right(double tau, double b, double a, double alpha, RightRootOptions opts) {
  if (!(tau > 0.0 && a > 0.0 && b > 0.0)) {
    throw InvalidConfig("right characteristic needs tau, a, b > 0");
  }
  std::vector<cdouble> seeds;
  const cdouble expansion = small_tau_expansion_right(tau, b, a, alpha);
  // alpha = 1 limit: tau z^2 + b z + a = 0, kept off the real axis.
  const double disc = 4.0 * a * tau - b * b;
  const cdouble quadratic(-b / (2.0 * tau), std::sqrt(std::abs(disc)) / (2.0 * tau) + 1e-3 * std::sqrt(a / tau));
  if (tau <= 1.0) {
    seeds = {expansion, quadratic};
  } else {
    seeds = {quadratic, expansion};
  }
  seeds.push_back(cdouble(-0.5, 1.0) * std::sqrt(a / tau));

  bool branch_hit = false;
  auto attempt = [&](const cdouble& seed, cdouble& root) {
    if (!(seed.imag() > 0.0)) return false;
    try {
      return newton_right(seed, tau, b, a, alpha, opts, root) && root.real() < 0.0;
    } catch (const BranchViolation&) {
      branch_hit = true;
      return false;
    }
  };
  cdouble root;
  for (const auto& seed : seeds) {
    if (attempt(seed, root)) return root;
  }

  // Fallback: best residuals on a polar grid over the upper-left quadrant.
  const double r1 = std::sqrt(a / tau);
  const double r2 = std::pow(a / b, 1.0 / alpha);
  const double r3 = std::pow(b / tau, 1.0 / (2.0 - alpha));
  const double rlo = 1e-2 * std::min({r1, r2, r3});
  const double rhi = 1e2 * std::max({r1, r2, r3});
  const int nr = std::max(16, static_cast<int>(40.0 * std::log10(rhi / rlo)));
  constexpr int nt = 64;
  std::vector<std::pair<double, cdouble>> grid;
  grid.reserve(static_cast<std::size_t>(nr * nt));
  for (int i = 0; i <= nr; ++i) {
    const double r = rlo * std::pow(rhi / rlo, static_cast<double>(i) / nr);
    for (int j = 1; j < nt; ++j) {
      const double theta = std::numbers::pi * (0.5 + 0.5 * j / nt);
      const cdouble z = std::polar(r, theta);
      grid.emplace_back(scaled_residual_right(z, tau, b, a, alpha), z);
    }
  }
  const std::size_t best = std::min<std::size_t>(8, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(best), grid.end(),
                    [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < best; ++i) {
    if (attempt(grid[i].second, root)) return root;
  }
  if (branch_hit) throw BranchViolation("right characteristic: Newton iterates kept reaching the branch cut");
  throw NoConvergence("right characteristic: Newton failed from every seed");
}

CharRoots left_roots(double tau, double a, double b, double alpha) {
  CharRoots r;
  r.kind = RootKind::Left;
  r.tau = tau;
  r.a = a;
  r.b = b;
  r.alpha = alpha;
  r.lambda = positive_root_left(tau, b, a, alpha);
  r.residual = scaled_residual_left(*r.lambda, tau, b, a, alpha);
  return r;
}

CharRoots right_roots(double tau, double a, double b, double alpha) {
  CharRoots r;
  r.kind = RootKind::Right;
  r.tau = tau;
  r.a = a;
  r.b = b;
  r.alpha = alpha;
  r.s1 = complex_pair_right(tau, b, a, alpha);
  r.residual = std::max(scaled_residual_right(*r.s1, tau, b, a, alpha),
                        scaled_residual_right(std::conj(*r.s1), tau, b, a, alpha));
  return r;
}

}  // namespace twave
