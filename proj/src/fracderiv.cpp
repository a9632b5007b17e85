#include "twave/fracderiv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "twave/errors.hpp"

namespace twave {

FracParams FracParams::make(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie in (0,1)");
  return {alpha, 1.0 / std::tgamma(1.0 - alpha)};
}

// ---------------------------------------------------------------------------
// product-trapezoid weights

namespace {

// 8-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 8> kGLx = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                        0.40828267875217505,  0.5917173212478249,  0.7627662049581645,
                                        0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kGLw = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                        0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                        0.11119051722668724, 0.05061426814518813};

}  // namespace

ProductWeights::ProductWeights(double alpha) : alpha_(alpha) {}

void ProductWeights::reserve(std::size_t m) { extend(m + 1); }

// Ensures left_/right_ hold entries 0..m+1 so that interior(m) is valid.
void ProductWeights::extend(std::size_t m) {
  if (m + 1 < left_.size()) return;
  const double beta = 1.0 - alpha_;
  const std::size_t old = left_.size();
  const std::size_t target = std::max(m + 2, 2 * old);
  left_.resize(target);
  right_.resize(target);
  for (std::size_t i = old; i < target; ++i) {
    const double md = static_cast<double>(i);
    double a = 0.0;
    double b = 0.0;
    if (i <= 8) {
      const double i0 = (std::pow(md, beta + 1.0) - std::pow(md - 1.0, beta + 1.0)) / (beta + 1.0);
      const double i1 = (std::pow(md, beta + 2.0) - std::pow(md - 1.0, beta + 2.0)) / (beta + 2.0);
      a = i1 - (md - 1.0) * i0;
      b = md * i0 - i1;
    } else {
      for (std::size_t q = 0; q < kGLx.size(); ++q) {
        const double t = kGLx[q];
        const double ker = std::pow(md - 1.0 + t, beta);
        a += kGLw[q] * ker * t;
        b += kGLw[q] * ker * (1.0 - t);
      }
    }
    left_[i] = a;
    right_[i] = b;
  }
  interior_.resize(target - 1);
  for (std::size_t i = old > 1 ? old - 1 : 1; i + 1 < target; ++i) interior_[i] = left_[i] + right_[i + 1];
}

double ProductWeights::left(std::size_t m) {
  extend(m);
  return left_[m];
}

double ProductWeights::right(std::size_t m) {
  extend(m);
  return right_[m];
}

double ProductWeights::interior(std::size_t m) {
  extend(m);
  return interior_[m];
}

const double* ProductWeights::interior_data(std::size_t m) {
  extend(m);
  return interior_.data();
}

// ---------------------------------------------------------------------------

namespace {

// Sum over nodes j < k of the weights of psi'_j for the grid integral at node k,
// in unit spacing: left(k) psi'_0 + sum_{j=1}^{k-1} interior(k-j) psi'_j.
double history_dot(const HistoryGrid& hist, std::size_t k, ProductWeights& w) {
  if (k == 0) return 0.0;
  w.reserve(k + 1);
  const double* pp = hist.psi_prime.data();
  const double head = w.left(k) * pp[0];
  const double* wi = w.interior_data(k);
  double acc = 0.0;
  for (std::size_t j = 1; j < k; ++j) acc += wi[k - j] * pp[j];
  return head + acc;
}

double boundary_term(const HistoryGrid& hist, std::size_t k, double beta) {
  const double span = static_cast<double>(k) * hist.dx;
  return hist.psi[0] * std::pow(span, beta);
}

}  // namespace

CaputoSplit caputo_split(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                         ProductWeights& weights) {
  const double beta = 1.0 - fp.alpha;
  const double pref = fp.d_alpha / beta;
  const double scale = std::pow(hist.dx, beta + 1.0);
  CaputoSplit s;
  s.known = tail_contribution(hist.tail, hist.xi_start, hist.xi(k), fp);
  if (k == 0) return s;
  s.known += pref * (scale * history_dot(hist, k, weights) + boundary_term(hist, k, beta));
  s.self_coeff = pref * scale * weights.right(1);
  return s;
}

double caputo_grid_eval(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                        ProductWeights& weights) {
  if (k == 0) return 0.0;
  const double beta = 1.0 - fp.alpha;
  const double pref = fp.d_alpha / beta;
  const double scale = std::pow(hist.dx, beta + 1.0);
  const double dot = history_dot(hist, k, weights) + weights.right(1) * hist.psi_prime[k];
  return pref * (scale * dot + boundary_term(hist, k, beta));
}

double caputo_grid_eval(const HistoryGrid& hist, std::size_t k, const FracParams& fp) {
  ProductWeights w(fp.alpha);
  return caputo_grid_eval(hist, k, fp, w);
}

double caputo_total(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                    ProductWeights& weights) {
  return tail_contribution(hist.tail, hist.xi_start, hist.xi(k), fp) +
         caputo_grid_eval(hist, k, fp, weights);
}

// ---------------------------------------------------------------------------
// incomplete gamma

double scaled_upper_gamma_q(double s, double x) {
  if (!(s > 0.0) || x < 0.0) throw InvalidConfig("incomplete gamma needs s > 0, x >= 0");
  if (x == 0.0) return 1.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x < 1.0) {
    // P(s,x) = x^s e^{-x} / Gamma(s+1) * sum_n x^n / ((s+1)...(s+n))
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 500; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < eps * std::abs(sum)) break;
    }
    const double p = std::exp(s * std::log(x) - x - std::lgamma(s + 1.0)) * sum;
    return std::exp(x) * (1.0 - p);
  }
  // Gamma(s,x) = e^{-x} x^s / (x+1-s - 1(1-s)/(x+3-s - 2(2-s)/(x+5-s - ...)))
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return std::exp(s * std::log(x) - std::lgamma(s)) * h;
}

double tail_contribution(const ExpTail& tail, double xi_start, double xi, const FracParams& fp) {
  if (tail.b == 0.0) return 0.0;
  const double dist = std::max(0.0, xi - xi_start);
  const double x = tail.lambda * dist;
  // e^{lambda xi} Q = e^{lambda xi_start} * (e^{x} Q)
  return tail.b * std::pow(tail.lambda, fp.alpha) * std::exp(tail.lambda * xi_start) *
         scaled_upper_gamma_q(1.0 - fp.alpha, x);
}

// ---------------------------------------------------------------------------

double interpolation_constant(const FracParams& fp) {
  return fp.d_alpha * 2.0 * std::pow(2.0 * fp.alpha, -fp.alpha) / (1.0 - fp.alpha);
}

bool bound_check(const HistoryGrid& hist, std::size_t k, double value, const FracParams& fp) {
  if (hist.size() == 0) return std::abs(value) == 0.0;
  const double edge = std::exp(hist.tail.lambda * hist.xi_start);
  double g = hist.tail.b * edge;
  double sup_g = std::abs(g);
  double sup_dg = std::abs(hist.tail.b * hist.tail.lambda * edge);
  const std::size_t last = std::min(k, hist.size() - 1);
  sup_dg = std::max(sup_dg, std::abs(hist.psi[0]));
  for (std::size_t j = 1; j <= last; ++j) {
    g += 0.5 * hist.dx * (hist.psi[j - 1] + hist.psi[j]);
    sup_g = std::max(sup_g, std::abs(g));
    sup_dg = std::max(sup_dg, std::abs(hist.psi[j]));
  }
  const double bound = interpolation_constant(fp) * std::pow(sup_g, 1.0 - fp.alpha) * std::pow(sup_dg, fp.alpha);
  return std::abs(value) <= bound;
}

std::complex<double> symbol_eval(double k, const FracParams& fp) {
  if (k == 0.0) return {0.0, 0.0};
  using std::numbers::pi;
  const double mag = std::pow(std::abs(k), fp.alpha);
  const double sgn = k > 0.0 ? 1.0 : -1.0;
  return {std::cos(fp.alpha * pi / 2.0) * mag, sgn * std::sin(fp.alpha * pi / 2.0) * mag};
}

}  // namespace twave
