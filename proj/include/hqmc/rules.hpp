#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hqmc/nets.hpp"
#include "hqmc/spaces.hpp"

namespace hqmc {

enum class RuleFamily { hodnet, gauss_hermite, icdf_qmc, custom };

std::string to_string(RuleFamily family);

/// Provenance of a rule: family tag plus the parameters used to build it.
struct RuleInfo {
  RuleFamily family = RuleFamily::custom;
  int alpha = 0;
  double b = 0.0;  // cube half-width, hodnet rules only
  std::string source;
};

/// Finite list of (node in R^s, weight) pairs; the universal input to the
/// worst-case-error evaluators. Immutable once built, safe to share.
class QuadratureRule {
 public:
  QuadratureRule(int s, std::vector<double> nodes, std::vector<double> weights,
                 RuleInfo info = {});

  int dimension() const { return s_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes_.data() + i * static_cast<std::size_t>(s_), static_cast<std::size_t>(s_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> nodes_flat() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const RuleInfo& info() const { return info_; }

 private:
  int s_;
  std::vector<double> nodes_;  // size() x s, row-major
  std::vector<double> weights_;
  RuleInfo info_;
};

/// Point set in [0,1)^s together with the base/precision it was generated
/// with (needed to displace exact-zero coordinates for inverse-CDF mapping).
struct PointSet {
  int s = 1;
  int base = 2;
  int precision = 53;
  std::vector<double> pts;  // count x s, row-major

  std::size_t size() const { return pts.size() / static_cast<std::size_t>(s); }
  std::span<const double> point(std::size_t i) const {
    return {pts.data() + i * static_cast<std::size_t>(s), static_cast<std::size_t>(s)};
  }
  static PointSet from_net(const DigitalNet& net);
};

/// Affine map z -> 2 b z - b taking [0,1]^s onto [-b,b]^s.
struct CubeMap {
  double b = 1.0;

  /// Componentwise image of z; z must lie in the closed unit cube.
  std::vector<double> apply(std::span<const double> z) const;
};

/// Quadrature rule for the Gaussian integral built from a unit-cube point
/// set: half-width b = 2 sqrt(alpha * ln N) (natural log), nodes are the
/// cube-mapped points, and weight_i = (2b)^s / N * phi_s(node_i).
QuadratureRule hodnet_rule(const HermiteSpaceParams& params, const PointSet& points);

/// Largest node count accepted by gauss_hermite. Above ~700 the extreme
/// nodes exceed the range where e^{-x^2/4} is a normal double, which the
/// series evaluators rely on.
inline constexpr int max_gauss_hermite_size = 600;

/// N-point Gauss-Hermite rule for the standard normal weight: nodes are the
/// eigenvalues of the Jacobi matrix with zero diagonal and off-diagonal
/// sqrt(1)..sqrt(N-1), weights the squared first eigenvector components.
/// Exact for polynomials of degree <= 2N-1; weights sum to 1.
QuadratureRule gauss_hermite(int n);

/// Full tensor product of the 1-D Gauss-Hermite rule; n_1d^s nodes.
QuadratureRule gauss_hermite_tensor(int n_1d, int s, std::uint64_t budget = 1'000'000);

/// Gaussian quantile function Phi^{-1}(p) for p in (0,1); absolute error
/// below 1e-9 over [1e-300, 1 - 1e-16] (rational initial guess plus one
/// Halley step against erfc).
double inverse_normal_cdf(double p);

/// Equal-weight rule with nodes Phi^{-1}(z_i) componentwise. Coordinates
/// that are exactly 0 are displaced by half the point-set spacing
/// base^{-precision}/2 before mapping.
QuadratureRule icdf_rule(const PointSet& points);

/// CSV with header "x_1,..,x_s,weight" and 17-significant-digit decimals;
/// read_rule_csv round-trips every double exactly.
void write_rule_csv(const QuadratureRule& rule, std::ostream& out);
QuadratureRule read_rule_csv(std::istream& in);

}  // namespace hqmc
