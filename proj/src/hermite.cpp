#include "hqmc/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hqmc {

namespace {

constexpr double quarter_log_two_pi = 0.45946926660233633;  // log(2*pi)/4

void check_degree(std::uint64_t k, std::uint64_t max_degree) {
  if (k > max_degree) {
    throw std::out_of_range("hermite: degree " + std::to_string(k) +
                            " exceeds configured maximum " + std::to_string(max_degree));
  }
}

}  // namespace

double hermite(std::uint64_t k, double x, std::uint64_t max_degree) {
  check_degree(k, max_degree);
  if (!std::isfinite(x)) throw std::invalid_argument("hermite: non-finite argument");
  if (k == 0) return 1.0;
  double prev = 1.0;  // H_0
  double cur = x;     // H_1
  for (std::uint64_t j = 1; j < k; ++j) {
    const double next =
        (x * cur - std::sqrt(static_cast<double>(j)) * prev) / std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_weighted(std::uint64_t k, double x, std::uint64_t max_degree) {
  check_degree(k, max_degree);
  if (!std::isfinite(x)) throw std::invalid_argument("hermite_weighted: non-finite argument");
  WeightedHermiteSeries series(x);
  while (series.degree() < k) series.advance();
  return series.current();
}

double hermite_multi(std::span<const std::uint64_t> k, std::span<const double> x,
                     std::uint64_t max_degree) {
  if (k.size() != x.size()) {
    throw std::invalid_argument("hermite_multi: index and argument dimensions differ");
  }
  double prod = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) prod *= hermite(k[j], x[j], max_degree);
  return prod;
}

double sigma_bound(std::span<const std::uint64_t> k) {
  const double sqrt_pi = std::sqrt(M_PI);
  double prod = 1.0;
  for (const std::uint64_t kj : k) {
    if (kj == 0) continue;
    prod *= std::min(1.0, sqrt_pi / std::pow(static_cast<double>(kj), 1.0 / 12.0));
  }
  return prod;
}

namespace detail {

double log_falling_factorial(std::uint64_t k, std::uint64_t tau) {
  double sum = 0.0, comp = 0.0;
  for (std::uint64_t t = 0; t < tau; ++t) {
    const double term = std::log(static_cast<double>(k - t));
    const double s = sum + term;
    comp += (std::abs(sum) >= term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  return sum + comp;
}

}  // namespace detail

double hermite_derivative_factor(std::uint64_t k, std::uint64_t tau) {
  if (tau > k) return 0.0;
  if (tau == 0) return 1.0;
  const double kd = static_cast<double>(k);
  // k!/(k-tau)! = k (k-1) ... (k-tau+1); the product overflows once
  // tau*log(k) approaches the double exponent range.
  if (static_cast<double>(tau) * std::log(kd) < 600.0) {
    double prod = 1.0;
    for (std::uint64_t t = 0; t < tau; ++t) prod *= static_cast<double>(k - t);
    return std::sqrt(prod);
  }
  return std::exp(0.5 * detail::log_falling_factorial(k, tau));
}

double gaussian_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

double gaussian_density(std::span<const double> x) {
  double sq = 0.0;
  for (const double xi : x) sq += xi * xi;
  return std::exp(-0.5 * sq) * std::pow(2.0 * M_PI, -0.5 * static_cast<double>(x.size()));
}

double sqrt_gaussian_density(double x) {
  return std::exp(-0.25 * x * x - quarter_log_two_pi);
}

WeightedHermiteSeries::WeightedHermiteSeries(double x)
    : x_(x), prev_(0.0), cur_(sqrt_gaussian_density(x)), k_(0) {}

double WeightedHermiteSeries::advance() {
  // psi_{k+1} = (x psi_k - sqrt(k) psi_{k-1}) / sqrt(k+1)
  const double kd = static_cast<double>(k_);
  const double next = (x_ * cur_ - std::sqrt(kd) * prev_) / std::sqrt(kd + 1.0);
  prev_ = cur_;
  cur_ = next;
  ++k_;
  return cur_;
}

}  // namespace hqmc
