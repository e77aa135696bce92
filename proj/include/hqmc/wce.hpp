#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqmc/rules.hpp"
#include "hqmc/spaces.hpp"

namespace hqmc {

/// Result of a truncated worst-case-error evaluation.
struct WceReport {
  double value = 0.0;        // e_m, the truncated worst-case error
  std::uint64_t m_truncation = 0;
  double bias_term = 0.0;    // (1 - sum of weights)^2
  double tail_bound = 0.0;   // estimate of the error contribution of k > m
  std::uint64_t series_terms_evaluated = 0;

  /// JSON object {"value":..,"m":..,"bias_term":..,"tail_bound":..,"terms":..};
  /// numbers carry enough digits to round-trip exactly.
  std::string to_json() const;
  static WceReport from_json(const std::string& text);
};

/// Truncated worst-case error of a 1-D rule in the Hermite space of
/// smoothness alpha:
///   e_m = sqrt( (1 - sum_i w_i)^2
///               + sum_{k=1}^{m} r_alpha(k) (sum_i w_i H_k(x_i))^2 ).
/// The inner sums are produced for all k in one pass per node via the
/// weighted Hermite recurrence; accumulation is compensated and runs in a
/// fixed order, so the result is bit-identical for any number of OpenMP
/// workers. Memory is O(N), time O(N m).
WceReport wce_hermite_1d(int alpha, const QuadratureRule& rule, std::uint64_t m);

/// Plain single-pass reference evaluator (node-major loop, O(m) memory).
/// Kept as an independent check of the blocked kernel; agrees with it to
/// roundoff but not bit-for-bit.
WceReport wce_hermite_1d_serial(int alpha, const QuadratureRule& rule, std::uint64_t m);

/// The inner series sums S_k = sum_i w_i H_k(x_i) for k = 1..m.
/// Independent of alpha; intended for diagnostics and tests.
std::vector<double> hermite_series_sums(const QuadratureRule& rule, std::uint64_t m);

/// Worst-case error of an equal-weight rule on [0,1)^s in the ANOVA space
/// of smoothness alpha <= 4. Uses the closed kernel identity
///   e^2 = -1 + (1/N^2) sum_{i,j} prod_c K_alpha(x_{i,c}, x_{j,c}),
/// which holds because the 1-D kernel integrates to one.
double wce_sobolev(int alpha, const QuadratureRule& rule);

/// Gaussian mass outside [-b,b]^s bound: 1 - (1 - e^{-b^2/4})^s.
/// With b = 2 sqrt(alpha ln N) this is at most s N^{-alpha}.
double err1_bound(const HermiteSpaceParams& params, double b);

/// Integral int_0^1 g^{(alpha)}(z) g^{(alpha)}(b z + a) dz for the bump
/// g(x) = (x - x^2)^alpha, evaluated by exact polynomial expansion
/// (alpha <= 4). Equals (alpha!)^2 / (2 alpha + 1) * b^alpha.
double bump_derivative_product_integral(int alpha, double a, double b);
double bump_derivative_product_closed_form(int alpha, double b);

}  // namespace hqmc
