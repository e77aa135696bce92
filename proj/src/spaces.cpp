#include "hqmc/spaces.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hqmc/compensated.hpp"
#include "hqmc/hermite.hpp"

namespace hqmc {

void HermiteSpaceParams::validate() const {
  if (s < 1) throw std::invalid_argument("HermiteSpaceParams: dimension must be >= 1");
  if (alpha < 1) throw std::invalid_argument("HermiteSpaceParams: smoothness must be >= 1");
}

double beta_tau(std::uint64_t tau, std::uint64_t k) {
  if (tau < 1) throw std::invalid_argument("beta_tau: tau must be >= 1");
  if (k < tau) return 0.0;
  const double kd = static_cast<double>(k);
  if (static_cast<double>(tau) * std::log(std::max(kd, 2.0)) < 600.0) {
    double prod = 1.0;
    for (std::uint64_t t = 0; t < tau; ++t) prod *= static_cast<double>(k - t);
    return prod;
  }
  return std::exp(detail::log_falling_factorial(k, tau));
}

double r_alpha(int alpha, std::uint64_t k) {
  if (alpha < 1) throw std::invalid_argument("r_alpha: alpha must be >= 1");
  if (k == 0) return 1.0;
  // sum_{tau=0}^{alpha} beta_tau(k) with beta_0 = 1; running product keeps it O(alpha).
  double sum = 1.0;
  double prod = 1.0;
  for (int tau = 1; tau <= alpha; ++tau) {
    if (static_cast<std::uint64_t>(tau) > k) break;
    prod *= static_cast<double>(k - static_cast<std::uint64_t>(tau) + 1);
    sum += prod;
  }
  return 1.0 / sum;
}

double r_multi(const HermiteSpaceParams& params, std::span<const std::uint64_t> k) {
  params.validate();
  if (k.size() != static_cast<std::size_t>(params.s)) {
    throw std::invalid_argument("r_multi: index length does not match dimension");
  }
  double prod = 1.0;
  for (const std::uint64_t kj : k) prod *= r_alpha(params.alpha, kj);
  return prod;
}

CoefficientSequence::CoefficientSequence(int alpha) : alpha_(alpha) {
  if (alpha < 1) throw std::invalid_argument("CoefficientSequence: alpha must be >= 1");
}

CoefficientSequence CoefficientSequence::memoized(int alpha, std::uint64_t up_to) {
  CoefficientSequence seq(alpha);
  seq.memo_.resize(up_to + 1);
  for (std::uint64_t k = 0; k <= up_to; ++k) seq.memo_[k] = r_alpha(alpha, k);
  return seq;
}

double CoefficientSequence::operator()(std::uint64_t k) const {
  if (k < memo_.size()) return memo_[k];
  return r_alpha(alpha_, k);
}

namespace {

// Exact rational coefficients of B_0..B_8, constant term first.
constexpr std::array<std::array<double, 9>, 9> bernoulli_coeffs = {{
    {1.0, 0, 0, 0, 0, 0, 0, 0, 0},
    {-1.0 / 2, 1.0, 0, 0, 0, 0, 0, 0, 0},
    {1.0 / 6, -1.0, 1.0, 0, 0, 0, 0, 0, 0},
    {0, 1.0 / 2, -3.0 / 2, 1.0, 0, 0, 0, 0, 0},
    {-1.0 / 30, 0, 1.0, -2.0, 1.0, 0, 0, 0, 0},
    {0, -1.0 / 6, 0, 5.0 / 3, -5.0 / 2, 1.0, 0, 0, 0},
    {1.0 / 42, 0, -1.0 / 2, 0, 5.0 / 2, -3.0, 1.0, 0, 0},
    {0, 1.0 / 6, 0, -7.0 / 6, 0, 7.0 / 2, -7.0 / 2, 1.0, 0},
    {-1.0 / 30, 0, 2.0 / 3, 0, -7.0 / 3, 0, 14.0 / 3, -4.0, 1.0},
}};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double bernoulli_poly(int r, double x) {
  if (r < 0 || r > 8) throw std::domain_error("bernoulli_poly: degree must be in [0, 8]");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("bernoulli_poly: argument outside [0, 1]");
  const auto& c = bernoulli_coeffs[static_cast<std::size_t>(r)];
  double value = c[static_cast<std::size_t>(r)];
  for (int i = r - 1; i >= 0; --i) value = value * x + c[static_cast<std::size_t>(i)];
  return value;
}

double hermite_kernel(const HermiteSpaceParams& params, std::span<const double> x,
                      std::span<const double> y, std::uint64_t truncation) {
  params.validate();
  const auto s = static_cast<std::size_t>(params.s);
  if (x.size() != s || y.size() != s) {
    throw std::invalid_argument("hermite_kernel: argument length does not match dimension");
  }
  double prod = 1.0;
  for (std::size_t j = 0; j < s; ++j) {
    // 1-D sum over k = 0..K of r_alpha(k) psi_k(x) psi_k(y), rescaled by
    // 1/(sqrt(phi(x)) sqrt(phi(y))) at the end; Kahan-compensated, ascending k.
    WeightedHermiteSeries sx(x[j]);
    WeightedHermiteSeries sy(y[j]);
    CompensatedSum sum;
    for (std::uint64_t k = 0;; ++k) {
      sum.add(r_alpha(params.alpha, k) * sx.current() * sy.current());
      if (k == truncation) break;
      sx.advance();
      sy.advance();
    }
    // undo the sqrt(phi(x)) sqrt(phi(y)) weighting of the psi recurrence
    const double log_scale = 0.25 * (x[j] * x[j] + y[j] * y[j]) + 0.5 * std::log(2.0 * M_PI);
    if (log_scale > 700.0) {
      throw std::range_error("hermite_kernel: argument too large for double range");
    }
    prod *= sum.total() * std::exp(log_scale);
  }
  return prod;
}

double sobolev_kernel_1d(int alpha, double x, double y) {
  if (alpha < 1 || alpha > 4) throw std::domain_error("sobolev_kernel: alpha must be in [1, 4]");
  if (!(x >= 0.0 && x < 1.0) || !(y >= 0.0 && y < 1.0)) {
    throw std::domain_error("sobolev_kernel: arguments must lie in [0, 1)");
  }
  double sum = 0.0;
  for (int r = 0; r <= alpha; ++r) {
    const double fr = factorial(r);
    sum += bernoulli_poly(r, x) * bernoulli_poly(r, y) / (fr * fr);
  }
  const double sign = (alpha % 2 == 0) ? -1.0 : 1.0;  // (-1)^{alpha+1}
  sum += sign * bernoulli_poly(2 * alpha, std::abs(x - y)) / factorial(2 * alpha);
  return sum;
}

double sobolev_kernel(int alpha, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("sobolev_kernel: argument lengths differ");
  }
  double prod = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) prod *= sobolev_kernel_1d(alpha, x[j], y[j]);
  return prod;
}

}  // namespace hqmc
