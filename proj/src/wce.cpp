#include "hqmc/wce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hqmc/compensated.hpp"
#include "hqmc/hermite.hpp"

namespace hqmc {

namespace {

constexpr double quarter_log_two_pi = 0.45946926660233633;  // log(2*pi)/4

// Nodes beyond this leave the range where sqrt(phi(x)) is a normal double,
// which both the weighted recurrence and the effective weights rely on.
constexpr double max_node_magnitude = 52.0;

// Effective weight w_i / sqrt(phi(x_i)); the series sums become
// S_k = sum_i wh_i psi_k(x_i) with |psi_k| <= 1.
std::vector<double> effective_weights(const QuadratureRule& rule) {
  std::vector<double> wh(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.node(i)[0];
    const double w = rule.weight(i);
    if (std::abs(x) > max_node_magnitude) {
      throw std::range_error("wce_hermite_1d: node magnitude exceeds supported range");
    }
    if (w == 0.0) {
      wh[i] = 0.0;
      continue;
    }
    if (std::log(std::abs(w)) + 0.25 * x * x + quarter_log_two_pi > 700.0) {
      throw std::range_error("wce_hermite_1d: effective weight overflows double range");
    }
    wh[i] = w * std::exp(0.25 * x * x + quarter_log_two_pi);
  }
  return wh;
}

double bias_of(const QuadratureRule& rule) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.size(); ++i) sum.add(rule.weight(i));
  return 1.0 - sum.total();
}

// Estimate of sum_{k>m} r_alpha(k) (sum_i |w_i|)^2 min(1, pi k^{-1/6}):
// explicit terms while the min clamps, then an integral comparison using
// r_alpha(k) <= (k - alpha + 1)^{-alpha}.
double squared_tail_estimate(int alpha, std::uint64_t m, double weight_l1) {
  const std::uint64_t clamp_end = 962;  // pi^6 < 962, beyond it min() = pi k^{-1/6}
  const std::uint64_t start = std::max<std::uint64_t>(m + 1, clamp_end);
  CompensatedSum explicit_part;
  for (std::uint64_t k = m + 1; k < start; ++k) {
    explicit_part.add(r_alpha(alpha, k) *
                      std::min(1.0, M_PI / std::pow(static_cast<double>(k), 1.0 / 6.0)));
  }
  const double p = static_cast<double>(alpha) - 5.0 / 6.0;
  const double lower = static_cast<double>(start) - static_cast<double>(alpha);
  const double integral = M_PI * std::pow(lower, -p) / p;
  return weight_l1 * weight_l1 * (explicit_part.total() + integral);
}

double weight_l1(const QuadratureRule& rule) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.size(); ++i) sum.add(std::abs(rule.weight(i)));
  return sum.total();
}

void check_wce_args(int alpha, const QuadratureRule& rule, std::uint64_t m) {
  if (alpha < 1) throw std::invalid_argument("wce_hermite_1d: alpha must be >= 1");
  if (rule.dimension() != 1) {
    throw std::invalid_argument("wce_hermite_1d: only 1-D rules are supported");
  }
  if (m < 1) throw std::invalid_argument("wce_hermite_1d: truncation must be >= 1");
}

constexpr std::size_t block_size = 4096;  // series indices per pass
constexpr std::size_t chunk_size = 256;   // nodes per reduction chunk, multiple of 4

// Runs the weighted recurrence over all nodes and hands the series sums
// S_{k0+1}..S_{k0+kb} to the consumer, block by block. Nodes are split into
// fixed-size chunks; chunks are processed in parallel but merged in index
// order, so the output does not depend on the worker count.
template <typename Consumer>
void series_sums_blocked(const QuadratureRule& rule, std::uint64_t m, Consumer&& consume) {
  const std::size_t n = rule.size();
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  const std::size_t padded = n_chunks * chunk_size;

  std::vector<double> xs(padded, 0.0), wh(padded, 0.0);
  std::vector<double> prev(padded, 0.0), cur(padded, 0.0);
  {
    const std::vector<double> w = effective_weights(rule);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rule.node(i)[0];
      wh[i] = w[i];
      cur[i] = sqrt_gaussian_density(xs[i]);  // psi_0
    }
    for (std::size_t i = n; i < padded; ++i) cur[i] = sqrt_gaussian_density(0.0);
  }

  std::vector<double> c_scale(block_size), c_prev(block_size);
  std::vector<double> partial(n_chunks * block_size);
  std::vector<double> sums(block_size);

  for (std::uint64_t k0 = 0; k0 < m; k0 += block_size) {
    const std::size_t kb = static_cast<std::size_t>(std::min<std::uint64_t>(block_size, m - k0));
    for (std::size_t t = 0; t < kb; ++t) {
      const double kd = static_cast<double>(k0 + t);
      c_scale[t] = 1.0 / std::sqrt(kd + 1.0);  // psi_{k+1} = x c_scale psi_k - c_prev psi_{k-1}
      c_prev[t] = std::sqrt(kd) * c_scale[t];
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
      const std::size_t off = static_cast<std::size_t>(c) * chunk_size;
      double* __restrict pp = prev.data() + off;
      double* __restrict pc = cur.data() + off;
      const double* __restrict px = xs.data() + off;
      const double* __restrict pw = wh.data() + off;
      double* __restrict out = partial.data() + static_cast<std::size_t>(c) * block_size;
      for (std::size_t t = 0; t < kb; ++t) {
        const double ca = c_scale[t];
        const double cb = c_prev[t];
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (std::size_t i = 0; i < chunk_size; i += 4) {
          const double n0 = px[i] * ca * pc[i] - cb * pp[i];
          const double n1 = px[i + 1] * ca * pc[i + 1] - cb * pp[i + 1];
          const double n2 = px[i + 2] * ca * pc[i + 2] - cb * pp[i + 2];
          const double n3 = px[i + 3] * ca * pc[i + 3] - cb * pp[i + 3];
          pp[i] = pc[i];
          pp[i + 1] = pc[i + 1];
          pp[i + 2] = pc[i + 2];
          pp[i + 3] = pc[i + 3];
          pc[i] = n0;
          pc[i + 1] = n1;
          pc[i + 2] = n2;
          pc[i + 3] = n3;
          s0 += pw[i] * n0;
          s1 += pw[i + 1] * n1;
          s2 += pw[i + 2] * n2;
          s3 += pw[i + 3] * n3;
        }
        out[t] = (s0 + s1) + (s2 + s3);
      }
    }
    for (std::size_t t = 0; t < kb; ++t) {
      double s = 0.0;
      for (std::size_t c = 0; c < n_chunks; ++c) s += partial[c * block_size + t];
      sums[t] = s;
    }
    consume(k0, std::span<const double>(sums.data(), kb));
  }
}

WceReport assemble_report(int alpha, const QuadratureRule& rule, std::uint64_t m,
                          double series_total, double bias) {
  WceReport report;
  report.m_truncation = m;
  report.series_terms_evaluated = m;
  report.bias_term = bias * bias;
  report.value = std::sqrt(report.bias_term + std::max(0.0, series_total));
  report.tail_bound = std::sqrt(squared_tail_estimate(alpha, m, weight_l1(rule)));
  return report;
}

}  // namespace

WceReport wce_hermite_1d(int alpha, const QuadratureRule& rule, std::uint64_t m) {
  check_wce_args(alpha, rule, m);
  CompensatedSum series;
  series_sums_blocked(rule, m, [&](std::uint64_t k0, std::span<const double> sums) {
    for (std::size_t t = 0; t < sums.size(); ++t) {
      const double s = sums[t];
      series.add(r_alpha(alpha, k0 + t + 1) * s * s);
    }
  });
  return assemble_report(alpha, rule, m, series.total(), bias_of(rule));
}

WceReport wce_hermite_1d_serial(int alpha, const QuadratureRule& rule, std::uint64_t m) {
  check_wce_args(alpha, rule, m);
  std::vector<double> sums(m + 1, 0.0);
  const std::vector<double> wh = effective_weights(rule);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    WeightedHermiteSeries psi(rule.node(i)[0]);
    for (std::uint64_t k = 1; k <= m; ++k) sums[k] += wh[i] * psi.advance();
  }
  CompensatedSum series;
  for (std::uint64_t k = 1; k <= m; ++k) series.add(r_alpha(alpha, k) * sums[k] * sums[k]);
  return assemble_report(alpha, rule, m, series.total(), bias_of(rule));
}

std::vector<double> hermite_series_sums(const QuadratureRule& rule, std::uint64_t m) {
  check_wce_args(1, rule, m);
  std::vector<double> out(m);
  series_sums_blocked(rule, m, [&](std::uint64_t k0, std::span<const double> sums) {
    std::copy(sums.begin(), sums.end(), out.begin() + static_cast<std::size_t>(k0));
  });
  return out;
}

double wce_sobolev(int alpha, const QuadratureRule& rule) {
  if (alpha < 1 || alpha > 4) throw std::invalid_argument("wce_sobolev: alpha must be in [1, 4]");
  const std::size_t n = rule.size();
  const double equal = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(rule.weight(i) - equal) > 1e-12 * equal) {
      throw std::invalid_argument("wce_sobolev: rule must have equal weights 1/N");
    }
  }
  CompensatedSum kernel_sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      kernel_sum.add(sobolev_kernel(alpha, rule.node(i), rule.node(j)));
    }
  }
  const double e2 = kernel_sum.total() / (static_cast<double>(n) * static_cast<double>(n)) - 1.0;
  return std::sqrt(std::max(0.0, e2));
}

double err1_bound(const HermiteSpaceParams& params, double b) {
  params.validate();
  if (!(b > 0.0)) throw std::invalid_argument("err1_bound: b must be positive");
  const double u = std::exp(-0.25 * b * b);
  // 1 - (1-u)^s, evaluated without cancellation for tiny u
  return -std::expm1(static_cast<double>(params.s) * std::log1p(-u));
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

double bump_derivative_product_integral(int alpha, double a, double b) {
  if (alpha < 1 || alpha > 4) {
    throw std::invalid_argument("bump_derivative_product_integral: alpha must be in [1, 4]");
  }
  // g^{(alpha)}(z) = sum_k (-1)^k C(alpha,k) (alpha+k)!/k! z^k
  std::vector<double> p(static_cast<std::size_t>(alpha) + 1);
  for (int k = 0; k <= alpha; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    p[static_cast<std::size_t>(k)] =
        sign * binomial(alpha, k) * factorial(alpha + k) / factorial(k);
  }
  // q(z) = g^{(alpha)}(b z + a), expanded in powers of z
  std::vector<double> q(static_cast<std::size_t>(alpha) + 1, 0.0);
  for (int k = 0; k <= alpha; ++k) {
    for (int j = 0; j <= k; ++j) {
      q[static_cast<std::size_t>(j)] += p[static_cast<std::size_t>(k)] * binomial(k, j) *
                                        std::pow(b, j) * std::pow(a, k - j);
    }
  }
  // integrate the product polynomial over [0,1]
  double integral = 0.0;
  for (int i = 0; i <= alpha; ++i) {
    for (int j = 0; j <= alpha; ++j) {
      integral += p[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)] /
                  static_cast<double>(i + j + 1);
    }
  }
  return integral;
}

double bump_derivative_product_closed_form(int alpha, double b) {
  if (alpha < 1 || alpha > 4) {
    throw std::invalid_argument("bump_derivative_product_closed_form: alpha must be in [1, 4]");
  }
  const double fa = factorial(alpha);
  return fa * fa / static_cast<double>(2 * alpha + 1) * std::pow(b, alpha);
}

std::string WceReport::to_json() const {
  nlohmann::json j;
  j["value"] = value;
  j["m"] = m_truncation;
  j["bias_term"] = bias_term;
  j["tail_bound"] = tail_bound;
  j["terms"] = series_terms_evaluated;
  return j.dump();
}

WceReport WceReport::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  WceReport r;
  r.value = j.at("value").get<double>();
  r.m_truncation = j.at("m").get<std::uint64_t>();
  r.bias_term = j.at("bias_term").get<double>();
  r.tail_bound = j.at("tail_bound").get<double>();
  r.series_terms_evaluated = j.at("terms").get<std::uint64_t>();
  return r;
}

}  // namespace hqmc
