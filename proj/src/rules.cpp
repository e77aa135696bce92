#include "hqmc/rules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hqmc/hermite.hpp"

namespace hqmc {

std::string to_string(RuleFamily family) {
  switch (family) {
    case RuleFamily::hodnet: return "hodnet";
    case RuleFamily::gauss_hermite: return "gauss-hermite";
    case RuleFamily::icdf_qmc: return "icdf-qmc";
    case RuleFamily::custom: return "custom";
  }
  return "custom";
}

QuadratureRule::QuadratureRule(int s, std::vector<double> nodes, std::vector<double> weights,
                               RuleInfo info)
    : s_(s), nodes_(std::move(nodes)), weights_(std::move(weights)), info_(std::move(info)) {
  if (s_ < 1) throw std::invalid_argument("QuadratureRule: dimension must be >= 1");
  if (weights_.empty() || nodes_.size() != weights_.size() * static_cast<std::size_t>(s_)) {
    throw std::invalid_argument("QuadratureRule: node/weight shapes do not match");
  }
  for (const double v : nodes_) {
    if (!std::isfinite(v)) throw std::invalid_argument("QuadratureRule: non-finite node");
  }
  for (const double w : weights_) {
    if (!std::isfinite(w)) throw std::invalid_argument("QuadratureRule: non-finite weight");
  }
}

PointSet PointSet::from_net(const DigitalNet& net) {
  PointSet ps;
  ps.s = net.dimension();
  ps.base = net.base();
  ps.precision = net.precision();
  ps.pts = net.all_points();
  return ps;
}

std::vector<double> CubeMap::apply(std::span<const double> z) const {
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!(z[j] >= 0.0 && z[j] <= 1.0)) {
      throw std::domain_error("CubeMap: point outside the unit cube");
    }
    out[j] = 2.0 * b * z[j] - b;
  }
  return out;
}

QuadratureRule hodnet_rule(const HermiteSpaceParams& params, const PointSet& points) {
  params.validate();
  if (points.s != params.s) throw std::invalid_argument("hodnet_rule: dimension mismatch");
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("hodnet_rule: need at least 2 points");
  const double nd = static_cast<double>(n);
  const CubeMap map{2.0 * std::sqrt(static_cast<double>(params.alpha) * std::log(nd))};
  const double volume_over_n = std::pow(2.0 * map.b, params.s) / nd;

  std::vector<double> nodes(points.pts.size());
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> x = map.apply(points.point(i));
    std::copy(x.begin(), x.end(), nodes.begin() + i * static_cast<std::size_t>(params.s));
    weights[i] = volume_over_n * gaussian_density(std::span<const double>(x));
  }
  RuleInfo info{RuleFamily::hodnet, params.alpha, map.b, "net"};
  return QuadratureRule(params.s, std::move(nodes), std::move(weights), info);
}

namespace {

// Implicit-QL diagonalization of a symmetric tridiagonal matrix, rotating a
// weight vector along (the classical imtqlx step of Golub-Welsch). d is the
// diagonal, e the sub-diagonal (e[n-1] unused), w the rotated vector;
// eigenvalues come back in d.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& w) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  const double eps = std::numeric_limits<double>::epsilon();
  e[static_cast<std::size_t>(n - 1)] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 50) throw std::runtime_error("gauss_hermite: eigenvalue iteration stalled");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double bb = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * bb;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - bb;
        f = w[i + 1];
        w[i + 1] = s * w[i] + c * f;
        w[i] = c * w[i] - s * f;
      }
      if (r == 0.0 && m - 1 >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1 || n > max_gauss_hermite_size) {
    throw std::length_error("gauss_hermite: size must be in [1, " +
                            std::to_string(max_gauss_hermite_size) + "]");
  }
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i + 1 < n; ++i) off[static_cast<std::size_t>(i)] = std::sqrt(i + 1.0);
  std::vector<double> vec(static_cast<std::size_t>(n), 0.0);
  vec[0] = 1.0;
  tridiagonal_ql(diag, off, vec);

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&diag](int a, int b) { return diag[static_cast<std::size_t>(a)] <
                                           diag[static_cast<std::size_t>(b)]; });

  std::vector<double> nodes(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto src = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
    nodes[static_cast<std::size_t>(i)] = diag[src];
    weights[static_cast<std::size_t>(i)] = vec[src] * vec[src];
  }
  // The spectrum is symmetric; averaging mirrored nodes and weights removes
  // the remaining last-ulp asymmetry of the iteration.
  for (int i = 0, j = n - 1; i < j; ++i, --j) {
    const double x = 0.5 * (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(i)]);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(j)] = x;
    const double w =
        0.5 * (weights[static_cast<std::size_t>(i)] + weights[static_cast<std::size_t>(j)]);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(j)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;

  RuleInfo info{RuleFamily::gauss_hermite, 0, 0.0, "jacobi"};
  return QuadratureRule(1, std::move(nodes), std::move(weights), info);
}

QuadratureRule gauss_hermite_tensor(int n_1d, int s, std::uint64_t budget) {
  if (s < 1) throw std::invalid_argument("gauss_hermite_tensor: dimension must be >= 1");
  const QuadratureRule base = gauss_hermite(n_1d);
  std::uint64_t total = 1;
  for (int j = 0; j < s; ++j) {
    total *= static_cast<std::uint64_t>(n_1d);
    if (total > budget) throw std::length_error("gauss_hermite_tensor: budget exceeded");
  }
  std::vector<double> nodes(total * static_cast<std::size_t>(s));
  std::vector<double> weights(total, 1.0);
  for (std::uint64_t i = 0; i < total; ++i) {
    std::uint64_t idx = i;
    for (int j = 0; j < s; ++j) {
      const std::size_t c = idx % static_cast<std::uint64_t>(n_1d);
      idx /= static_cast<std::uint64_t>(n_1d);
      nodes[i * static_cast<std::size_t>(s) + static_cast<std::size_t>(j)] = base.node(c)[0];
      weights[i] *= base.weight(c);
    }
  }
  RuleInfo info{RuleFamily::gauss_hermite, 0, 0.0, "tensor"};
  return QuadratureRule(s, std::move(nodes), std::move(weights), info);
}

namespace {

// Acklam's rational approximation to the Gaussian quantile function.
double inverse_normal_cdf_estimate(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("inverse_normal_cdf: argument must lie strictly in (0, 1)");
  }
  double x = inverse_normal_cdf_estimate(p);
  // One Halley step; skipped in the extreme tail where phi(x) leaves the
  // normal double range (the estimate alone is already ~1e-9 there).
  if (x * x < 1400.0) {
    const double phi = gaussian_density(x);
    const double u = (normal_cdf(x) - p) / phi;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

QuadratureRule icdf_rule(const PointSet& points) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("icdf_rule: empty point set");
  const double shift =
      0.5 * std::pow(static_cast<double>(points.base), -static_cast<double>(points.precision));
  std::vector<double> nodes(points.pts.size());
  for (std::size_t i = 0; i < points.pts.size(); ++i) {
    double z = points.pts[i];
    if (z == 0.0) z = shift;
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("icdf_rule: point outside [0, 1)");
    nodes[i] = inverse_normal_cdf(z);
  }
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  RuleInfo info{RuleFamily::icdf_qmc, 0, 0.0, "net"};
  return QuadratureRule(points.s, std::move(nodes), std::move(weights), info);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

}  // namespace

void write_rule_csv(const QuadratureRule& rule, std::ostream& out) {
  std::string line;
  for (int j = 1; j <= rule.dimension(); ++j) {
    line += "x_" + std::to_string(j) + ",";
  }
  line += "weight\n";
  out << line;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    line.clear();
    for (const double x : rule.node(i)) {
      append_double(line, x);
      line += ',';
    }
    append_double(line, rule.weight(i));
    line += '\n';
    out << line;
  }
}

QuadratureRule read_rule_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("rule csv: missing header");
  const int s = static_cast<int>(std::count(header.begin(), header.end(), ','));
  if (s < 1) throw std::runtime_error("rule csv: header must list coordinates and weight");
  std::vector<double> nodes;
  std::vector<double> weights;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (int j = 0; j <= s; ++j) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      double v = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
      if (res.ec != std::errc{}) throw std::runtime_error("rule csv: bad number");
      if (j < s) {
        nodes.push_back(v);
      } else {
        weights.push_back(v);
      }
      pos = end + 1;
    }
  }
  return QuadratureRule(s, std::move(nodes), std::move(weights),
                        RuleInfo{RuleFamily::custom, 0, 0.0, "csv"});
}

}  // namespace hqmc
