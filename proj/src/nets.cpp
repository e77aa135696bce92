#include "hqmc/nets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hqmc {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

void GeneratingMatrices::validate() const {
  if (!is_prime(q)) throw std::invalid_argument("GeneratingMatrices: base must be prime");
  if (m < 1 || n < m) throw std::invalid_argument("GeneratingMatrices: need n >= m >= 1");
  if (s < 1 || mats.size() != static_cast<std::size_t>(s)) {
    throw std::invalid_argument("GeneratingMatrices: matrix count does not match dimension");
  }
  const std::size_t expected = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  for (const auto& mat : mats) {
    if (mat.size() != expected) {
      throw std::invalid_argument("GeneratingMatrices: matrix has wrong shape");
    }
    for (const std::uint8_t e : mat) {
      if (e >= q) throw std::invalid_argument("GeneratingMatrices: entry outside field");
    }
  }
  if (static_cast<double>(m) * std::log2(static_cast<double>(q)) > 62.0) {
    throw std::invalid_argument("GeneratingMatrices: q^m exceeds the supported index range");
  }
}

void GeneratingMatrices::dump(std::ostream& out) const {
  out << q << ' ' << n << ' ' << m << ' ' << s << '\n';
  for (int j = 0; j < s; ++j) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < m; ++c) {
        if (c > 0) out << ' ';
        out << static_cast<int>(at(j, r, c));
      }
      out << '\n';
    }
  }
}

GeneratingMatrices GeneratingMatrices::restore(std::istream& in) {
  GeneratingMatrices gm;
  if (!(in >> gm.q >> gm.n >> gm.m >> gm.s)) {
    throw std::runtime_error("GeneratingMatrices: bad header, expected 'q n m s'");
  }
  if (gm.n < 1 || gm.m < 1 || gm.s < 1) {
    throw std::runtime_error("GeneratingMatrices: non-positive shape in header");
  }
  gm.mats.assign(static_cast<std::size_t>(gm.s),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(gm.n) *
                                           static_cast<std::size_t>(gm.m)));
  for (int j = 0; j < gm.s; ++j) {
    for (int r = 0; r < gm.n; ++r) {
      for (int c = 0; c < gm.m; ++c) {
        int digit = 0;
        if (!(in >> digit)) throw std::runtime_error("GeneratingMatrices: truncated digit data");
        gm.at(j, r, c) = static_cast<std::uint8_t>(digit);
      }
    }
  }
  gm.validate();
  return gm;
}

DigitalNet::DigitalNet(GeneratingMatrices matrices) : gm_(std::move(matrices)) {
  gm_.validate();
  size_ = pow_u64(static_cast<std::uint64_t>(gm_.q), gm_.m);
}

void DigitalNet::point_digits(std::uint64_t h, int j, std::span<std::uint8_t> out) const {
  if (h >= size_) throw std::out_of_range("DigitalNet: point index out of range");
  if (j < 0 || j >= gm_.s) throw std::out_of_range("DigitalNet: coordinate out of range");
  if (out.size() != static_cast<std::size_t>(gm_.n)) {
    throw std::invalid_argument("DigitalNet: digit buffer has wrong length");
  }
  const auto q = static_cast<std::uint64_t>(gm_.q);
  std::uint8_t eta[64];
  for (int c = 0; c < gm_.m; ++c) {
    eta[c] = static_cast<std::uint8_t>(h % q);
    h /= q;
  }
  for (int r = 0; r < gm_.n; ++r) {
    std::uint32_t acc = 0;
    for (int c = 0; c < gm_.m; ++c) acc += static_cast<std::uint32_t>(gm_.at(j, r, c)) * eta[c];
    out[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(acc % q);
  }
}

std::vector<double> DigitalNet::point(std::uint64_t h) const {
  std::vector<double> x(static_cast<std::size_t>(gm_.s));
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(gm_.n));
  const double q = static_cast<double>(gm_.q);
  for (int j = 0; j < gm_.s; ++j) {
    point_digits(h, j, digits);
    double v = 0.0;
    for (int r = gm_.n - 1; r >= 0; --r) {
      v = (v + static_cast<double>(digits[static_cast<std::size_t>(r)])) / q;
    }
    x[static_cast<std::size_t>(j)] = v;
  }
  return x;
}

std::vector<double> DigitalNet::all_points() const {
  const std::uint64_t count = size_;
  const auto s = static_cast<std::size_t>(gm_.s);
  std::vector<double> out(count * s);
#pragma omp parallel for schedule(static)
  for (std::int64_t h = 0; h < static_cast<std::int64_t>(count); ++h) {
    const std::vector<double> p = point(static_cast<std::uint64_t>(h));
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::size_t>(h) * s);
  }
  return out;
}

std::vector<DirectionNumberRow> parse_direction_numbers(std::istream& in) {
  std::vector<DirectionNumberRow> rows;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header_seen) {  // "d s a m_i" header
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    DirectionNumberRow row;
    long long a_val = -1;
    if (!(ls >> row.dim >> row.degree >> a_val)) {
      throw ParseError("direction numbers: expected 'd s a m_i...'", line_no);
    }
    if (row.dim < 2) throw ParseError("direction numbers: dimension must be >= 2", line_no);
    if (row.degree < 1) throw ParseError("direction numbers: degree must be >= 1", line_no);
    if (a_val < 0) throw ParseError("direction numbers: negative coefficient code", line_no);
    row.a = static_cast<std::uint32_t>(a_val);
    for (int i = 0; i < row.degree; ++i) {
      long long mi = 0;
      if (!(ls >> mi)) {
        throw ParseError("direction numbers: expected " + std::to_string(row.degree) +
                             " initial values",
                         line_no);
      }
      if (mi < 1 || mi % 2 == 0 || mi >= (1LL << (i + 1))) {
        throw ParseError("direction numbers: m_" + std::to_string(i + 1) +
                             " must be odd and < 2^" + std::to_string(i + 1),
                         line_no);
      }
      row.m.push_back(static_cast<std::uint32_t>(mi));
    }
    std::string trailing;
    if (ls >> trailing) throw ParseError("direction numbers: trailing tokens", line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<DirectionNumberRow>& embedded_direction_numbers() {
  // Head of the Joe-Kuo "new-joe-kuo-6" table, dimensions 2..8.
  static const std::vector<DirectionNumberRow> table = [] {
    std::istringstream in(
        "d s a m_i\n"
        "2 1 0 1\n"
        "3 2 1 1 3\n"
        "4 3 1 1 3 1\n"
        "5 3 2 1 1 1\n"
        "6 4 1 1 1 3 3\n"
        "7 4 4 1 3 5 13\n"
        "8 5 2 1 1 5 5 17\n");
    return parse_direction_numbers(in);
  }();
  return table;
}

GeneratingMatrices sobol_matrices(int s, int m, std::span<const DirectionNumberRow> rows) {
  if (s < 1) throw std::invalid_argument("sobol_matrices: dimension must be >= 1");
  if (m < 1 || m > 62) throw std::invalid_argument("sobol_matrices: need 1 <= m <= 62");
  GeneratingMatrices gm;
  gm.q = 2;
  gm.n = m;
  gm.m = m;
  gm.s = s;
  gm.mats.assign(static_cast<std::size_t>(s),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(m) *
                                           static_cast<std::size_t>(m)));
  // Coordinate 1: identity matrix, i.e. the van der Corput sequence.
  for (int r = 0; r < m; ++r) gm.at(0, r, r) = 1;

  for (int j = 2; j <= s; ++j) {
    const auto it = std::find_if(rows.begin(), rows.end(),
                                 [j](const DirectionNumberRow& r) { return r.dim == j; });
    if (it == rows.end()) {
      throw std::out_of_range("sobol_matrices: no direction numbers for dimension " +
                              std::to_string(j));
    }
    const DirectionNumberRow& row = *it;
    const int e = row.degree;
    std::vector<std::uint64_t> mi(static_cast<std::size_t>(m) + 1, 0);
    for (int k = 1; k <= m; ++k) {
      if (k <= e) {
        mi[static_cast<std::size_t>(k)] = row.m[static_cast<std::size_t>(k - 1)];
      } else {
        std::uint64_t v = mi[static_cast<std::size_t>(k - e)] ^
                          (mi[static_cast<std::size_t>(k - e)] << e);
        for (int t = 1; t <= e - 1; ++t) {
          if ((row.a >> (e - 1 - t)) & 1U) v ^= mi[static_cast<std::size_t>(k - t)] << t;
        }
        mi[static_cast<std::size_t>(k)] = v;
      }
    }
    // Column k holds the binary digits of v_k = m_k / 2^k: row r (0-based)
    // is the coefficient of 2^{-(r+1)}.
    for (int k = 1; k <= m; ++k) {
      const std::uint64_t v = mi[static_cast<std::size_t>(k)];
      for (int r = 0; r < k; ++r) {
        gm.at(j - 1, r, k - 1) = static_cast<std::uint8_t>((v >> (k - 1 - r)) & 1U);
      }
    }
  }
  return gm;
}

GeneratingMatrices sobol_matrices(int s, int m) {
  return sobol_matrices(s, m, embedded_direction_numbers());
}

DigitalNet sobol_net(int s, int m, std::span<const DirectionNumberRow> rows) {
  return DigitalNet(sobol_matrices(s, m, rows));
}

DigitalNet sobol_net(int s, int m) { return DigitalNet(sobol_matrices(s, m)); }

int sobol_t_parameter(int s, std::span<const DirectionNumberRow> rows) {
  int t = 0;  // coordinate 1 has degree 1 and contributes 0
  for (int j = 2; j <= s; ++j) {
    const auto it = std::find_if(rows.begin(), rows.end(),
                                 [j](const DirectionNumberRow& r) { return r.dim == j; });
    if (it == rows.end()) {
      throw std::out_of_range("sobol_t_parameter: no direction numbers for dimension " +
                              std::to_string(j));
    }
    t += it->degree - 1;
  }
  return t;
}

DigitalNet interlaced_net(const DigitalNet& base, int d) {
  if (d < 1) throw std::invalid_argument("interlaced_net: factor must be >= 1");
  const GeneratingMatrices& bm = base.matrices();
  if (bm.s % d != 0) {
    throw std::invalid_argument("interlaced_net: base dimension not divisible by factor");
  }
  GeneratingMatrices gm;
  gm.q = bm.q;
  gm.m = bm.m;
  gm.s = bm.s / d;
  gm.n = std::min(53, d * bm.n);
  gm.mats.assign(static_cast<std::size_t>(gm.s),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(gm.n) *
                                           static_cast<std::size_t>(gm.m)));
  // Output digit a*d + r comes from digit a of base coordinate j*d + r, so
  // interlacing the matrix rows interlaces the point digits exactly.
  for (int j = 0; j < gm.s; ++j) {
    for (int row = 0; row < gm.n; ++row) {
      const int a = row / d;
      const int r = row % d;
      for (int c = 0; c < gm.m; ++c) gm.at(j, row, c) = bm.at(j * d + r, a, c);
    }
  }
  return DigitalNet(std::move(gm));
}

bool elementary_interval_check(const DigitalNet& net, std::span<const int> exponents) {
  const GeneratingMatrices& gm = net.matrices();
  if (exponents.size() != static_cast<std::size_t>(gm.s)) {
    throw std::invalid_argument("elementary_interval_check: exponent count != dimension");
  }
  int total = 0;
  for (const int d : exponents) {
    if (d < 0) throw std::invalid_argument("elementary_interval_check: negative exponent");
    total += d;
  }
  if (total > gm.m) {
    throw std::invalid_argument("elementary_interval_check: sum of exponents exceeds m");
  }
  const std::uint64_t boxes = pow_u64(static_cast<std::uint64_t>(gm.q), total);
  const std::uint64_t expected = net.size() / boxes;
  std::vector<std::uint64_t> counts(boxes, 0);
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(gm.n));
  for (std::uint64_t h = 0; h < net.size(); ++h) {
    std::uint64_t box = 0;
    for (int j = 0; j < gm.s; ++j) {
      const int dj = exponents[static_cast<std::size_t>(j)];
      if (dj == 0) continue;
      net.point_digits(h, j, digits);
      for (int r = 0; r < dj; ++r) {
        box = box * static_cast<std::uint64_t>(gm.q) + digits[static_cast<std::size_t>(r)];
      }
    }
    ++counts[box];
  }
  return std::all_of(counts.begin(), counts.end(),
                     [expected](std::uint64_t c) { return c == expected; });
}

}  // namespace hqmc
