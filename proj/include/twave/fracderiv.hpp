#pragma once

// Evaluation of the non-local operator
//
//   D^alpha[phi](xi) = d_alpha * int_{-inf}^{xi} phi'(y) (xi - y)^(-alpha) dy,
//   d_alpha = 1 / Gamma(1 - alpha),
//
// on a trajectory sampled as an analytic exponential tail on (-inf, xi_start]
// followed by a uniform grid. The grid part is integrated by parts onto the
// bounded kernel (xi - y)^(1-alpha) / (1-alpha) acting on psi' = phi'', and
// the piecewise-linear interpolant of psi' is integrated exactly against it.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace twave {

struct FracParams {
  double alpha = 0.5;
  double d_alpha = 0.0;  // 1 / Gamma(1 - alpha)

  static FracParams make(double alpha);
};

/// Linearised far field phi = phi_- + b exp(lambda xi) on (-inf, xi_start].
struct ExpTail {
  double b = 0.0;
  double lambda = 1.0;
};

/// psi = phi' and psi' = phi'' at xi_start + k dx, k = 0, 1, ...
struct HistoryGrid {
  double xi_start = 0.0;
  double dx = 0.01;
  std::vector<double> psi;
  std::vector<double> psi_prime;
  ExpTail tail;

  double xi(std::size_t k) const { return xi_start + static_cast<double>(k) * dx; }
  std::size_t size() const { return psi.size(); }
};

/// Exact integrals of s^(1-alpha) against the two linear hat pieces on each
/// cell [m-1, m], scaled to unit spacing and cached by m.
class ProductWeights {
 public:
  explicit ProductWeights(double alpha);

  double alpha() const { return alpha_; }
  /// Weight of the left node of the cell whose left end is m cells behind.
  double left(std::size_t m);
  /// Weight of the right node of that cell.
  double right(std::size_t m);
  /// Combined weight of node k - m in the sum for node k (1 <= m < k).
  double interior(std::size_t m);

  /// Contiguous interior weights valid for indices 1..m.
  const double* interior_data(std::size_t m);

  void reserve(std::size_t m);

 private:
  void extend(std::size_t m);

  double alpha_;
  std::vector<double> left_{0.0};
  std::vector<double> right_{0.0};
  std::vector<double> interior_{0.0};
};

/// D^alpha at node k written as known + self_coeff * psi'_k, where `known`
/// needs psi_prime only up to k-1. Includes the analytic tail.
struct CaputoSplit {
  double known = 0.0;
  double self_coeff = 0.0;
};

CaputoSplit caputo_split(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                         ProductWeights& weights);

/// Grid part of D^alpha at node k: the Caputo derivative from xi_start,
/// including the boundary term psi(xi_start) (xi_k - xi_start)^(1-alpha)/(1-alpha).
/// Requires psi_prime populated up to and including k.
double caputo_grid_eval(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                        ProductWeights& weights);
double caputo_grid_eval(const HistoryGrid& hist, std::size_t k, const FracParams& fp);

/// d_alpha * int_{-inf}^{xi_start} b lambda e^{lambda y} (xi - y)^(-alpha) dy
///   = b lambda^alpha e^{lambda xi} Q(1 - alpha, lambda (xi - xi_start)),
/// evaluated without forming e^{lambda xi}.
double tail_contribution(const ExpTail& tail, double xi_start, double xi, const FracParams& fp);

/// Full D^alpha at node k (tail + grid).
double caputo_total(const HistoryGrid& hist, std::size_t k, const FracParams& fp,
                    ProductWeights& weights);

/// e^x Gamma(s, x) / Gamma(s) for s > 0, x >= 0: power series below x = 1,
/// Lentz continued fraction above.
double scaled_upper_gamma_q(double s, double x);

/// C_alpha = d_alpha * 2 (2 alpha)^(-alpha) / (1 - alpha).
double interpolation_constant(const FracParams& fp);

/// True iff |value| <= C_alpha sup|g|^(1-alpha) sup|g'|^alpha over the history
/// up to node k, with g = phi - phi_- rebuilt from the tail and psi samples.
bool bound_check(const HistoryGrid& hist, std::size_t k, double value, const FracParams& fp);

/// Fourier symbol (cos(alpha pi/2) + i sin(alpha pi/2) sgn k) |k|^alpha.
std::complex<double> symbol_eval(double k, const FracParams& fp);

}  // namespace twave
