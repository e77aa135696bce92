#pragma once

#include <cstdint>
#include <span>

namespace hqmc {

/// Degrees above this are refused; guards against silent precision loss in
/// very long recurrences rather than against a hard failure.
inline constexpr std::uint64_t default_max_hermite_degree = 100'000'000;

/// Normalized probabilists' Hermite polynomial H_k(x), with
/// H_0 = 1, H_1 = x and the stable three-term recurrence
/// H_{k+1}(x) = (x H_k(x) - sqrt(k) H_{k-1}(x)) / sqrt(k+1),
/// so that int H_k^2 phi = 1 for the standard normal density phi.
double hermite(std::uint64_t k, double x,
               std::uint64_t max_degree = default_max_hermite_degree);

/// H_k(x) * sqrt(phi(x)), evaluated by running the recurrence on the
/// weighted functions psi_k = H_k e^{-x^2/4} (2 pi)^{-1/4}. The result is
/// bounded by 1 in absolute value (Cramer) and never overflows where bare
/// H_k(x) would.
double hermite_weighted(std::uint64_t k, double x,
                        std::uint64_t max_degree = default_max_hermite_degree);

/// Product of 1-D Hermite polynomials, prod_j H_{k_j}(x_j).
double hermite_multi(std::span<const std::uint64_t> k, std::span<const double> x,
                     std::uint64_t max_degree = default_max_hermite_degree);

/// Upper bound prod_j min(1, sqrt(pi)/k_j^{1/12}) on sup_x |H_k(x) sqrt(phi_s(x))|;
/// factors with k_j = 0 contribute 1.
double sigma_bound(std::span<const std::uint64_t> k);

/// sqrt(k!/(k-tau)!) for k >= tau, else 0. Switches to log-gamma once the
/// direct product would lose range.
double hermite_derivative_factor(std::uint64_t k, std::uint64_t tau);

namespace detail {
/// ln(k!/(k-tau)!) for k >= tau, as a compensated sum of logs; accurate to
/// a few ulp even where the ratio itself overflows.
double log_falling_factorial(std::uint64_t k, std::uint64_t tau);
}  // namespace detail

/// Standard normal density phi(x) = (2 pi)^{-1/2} e^{-x^2/2}.
double gaussian_density(double x);

/// Product density phi_s(x) = (2 pi)^{-s/2} e^{-|x|^2/2}.
double gaussian_density(std::span<const double> x);

/// sqrt(phi(x)) = (2 pi)^{-1/4} e^{-x^2/4}; the psi_0 of the weighted recurrence.
double sqrt_gaussian_density(double x);

/// Streaming evaluator for psi_k(x) = H_k(x) sqrt(phi(x)). Starts at k = 0;
/// advance() moves to the next degree and returns the new value. All values
/// stay in [-1, 1], so arbitrarily long runs are safe.
class WeightedHermiteSeries {
 public:
  explicit WeightedHermiteSeries(double x);

  double current() const { return cur_; }
  std::uint64_t degree() const { return k_; }
  double advance();

 private:
  double x_;
  double prev_;  // psi_{k-1}
  double cur_;   // psi_k
  std::uint64_t k_;
};

}  // namespace hqmc
