#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hqmc {

/// Dimension and smoothness of a Hermite space of finite smoothness.
struct HermiteSpaceParams {
  int s = 1;      // dimension, >= 1
  int alpha = 1;  // smoothness, >= 1

  void validate() const;
};

/// beta_tau(k) = k!/(k-tau)! for k >= tau, else 0 (tau >= 1).
double beta_tau(std::uint64_t tau, std::uint64_t k);

/// Coefficient r_alpha(k): 1 for k = 0, otherwise
/// (sum_{tau=0}^{alpha} beta_tau(k))^{-1} with the tau = 0 term taken as 1.
/// Strictly positive, and r_alpha(k) k^alpha -> 1 as k -> infinity.
double r_alpha(int alpha, std::uint64_t k);

/// Product coefficient r_{s,alpha}(k) = prod_j r_alpha(k_j).
double r_multi(const HermiteSpaceParams& params, std::span<const std::uint64_t> k);

/// r_alpha with an optional eagerly filled memo table. The table is immutable
/// after construction, so lookups are safe from any number of threads.
class CoefficientSequence {
 public:
  explicit CoefficientSequence(int alpha);
  static CoefficientSequence memoized(int alpha, std::uint64_t up_to);

  int alpha() const { return alpha_; }
  double operator()(std::uint64_t k) const;

 private:
  int alpha_;
  std::vector<double> memo_;
};

/// Bernoulli polynomial B_r(x) for 0 <= r <= 8 and x in [0, 1],
/// from hard-coded exact rational coefficients.
double bernoulli_poly(int r, double x);

/// Truncated Hermite-space kernel
///   sum_{k in {0..K}^s} r_{s,alpha}(k) H_k(x) H_k(y),
/// evaluated as a product of 1-D sums with compensated accumulation in
/// ascending k.
double hermite_kernel(const HermiteSpaceParams& params, std::span<const double> x,
                      std::span<const double> y, std::uint64_t truncation);

/// 1-D kernel of the ANOVA (unanchored Sobolev) space of smoothness alpha:
///   sum_{r=0}^{alpha} B_r(x) B_r(y) / (r!)^2
///     + (-1)^{alpha+1} B_{2 alpha}(|x-y|) / (2 alpha)!
double sobolev_kernel_1d(int alpha, double x, double y);

/// Product of 1-D ANOVA kernels over the coordinates; x, y in [0,1)^s, alpha <= 4.
double sobolev_kernel(int alpha, std::span<const double> x, std::span<const double> y);

}  // namespace hqmc
