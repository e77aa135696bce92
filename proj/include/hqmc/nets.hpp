#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqmc {

/// Error raised by the direction-number parser; carries the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Generating matrices of a digital net over F_q: s matrices with n rows
/// (digit precision) and m columns, entries in {0, .., q-1}.
struct GeneratingMatrices {
  int q = 2;
  int n = 0;
  int m = 0;
  int s = 0;
  std::vector<std::vector<std::uint8_t>> mats;  // s entries, row-major n*m

  std::uint8_t at(int j, int row, int col) const {
    return mats[static_cast<std::size_t>(j)]
               [static_cast<std::size_t>(row) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(col)];
  }
  std::uint8_t& at(int j, int row, int col) {
    return mats[static_cast<std::size_t>(j)]
               [static_cast<std::size_t>(row) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(col)];
  }

  void validate() const;

  /// Plain-text dump: header "q n m s", then each matrix as n rows of m digits.
  /// restore() round-trips bit-exactly.
  void dump(std::ostream& out) const;
  static GeneratingMatrices restore(std::istream& in);
};

/// Digital net over F_q: q^m points in [0,1)^s obtained by multiplying the
/// base-q digit vector of the point index with the generating matrices.
/// Immutable after construction; point generation is a pure read.
class DigitalNet {
 public:
  explicit DigitalNet(GeneratingMatrices matrices);

  const GeneratingMatrices& matrices() const { return gm_; }
  int dimension() const { return gm_.s; }
  int precision() const { return gm_.n; }
  int base() const { return gm_.q; }
  std::uint64_t size() const { return size_; }

  /// Digits xi_{h,j,1..n} of coordinate j of point h (exact, in {0,..,q-1}).
  void point_digits(std::uint64_t h, int j, std::span<std::uint8_t> out) const;

  /// Point h as doubles, x_j = sum_i xi_i q^{-i}.
  std::vector<double> point(std::uint64_t h) const;

  /// All q^m points, row-major (size() x s). Generation over disjoint index
  /// ranges is embarrassingly parallel and identical to sequential output.
  std::vector<double> all_points() const;

 private:
  GeneratingMatrices gm_;
  std::uint64_t size_;
};

/// One line of a Joe-Kuo direction-number table: net dimension (>= 2),
/// degree of the primitive polynomial, encoded middle coefficients a, and
/// the initial direction integers m_1..m_degree (all odd, m_i < 2^i).
struct DirectionNumberRow {
  int dim = 0;
  int degree = 0;
  std::uint32_t a = 0;
  std::vector<std::uint32_t> m;
};

/// Parses the Joe-Kuo "new-joe-kuo-6" text format: one header line, then
/// whitespace-separated rows "d s a m_1 .. m_s". Throws ParseError with the
/// line number on malformed input.
std::vector<DirectionNumberRow> parse_direction_numbers(std::istream& in);

/// Built-in table for net dimensions 2..8 so everything runs without a
/// direction-number file on disk.
const std::vector<DirectionNumberRow>& embedded_direction_numbers();

/// Sobol' generating matrices over F_2 for s dimensions and m columns
/// (n = m rows). Coordinate 1 is the identity matrix (van der Corput);
/// coordinates 2.. come from the direction-number rows via the standard
/// recurrence  m_k = 2^e m_{k-e} xor m_{k-e} xor xor_{t=1}^{e-1} 2^t a_t m_{k-t}.
GeneratingMatrices sobol_matrices(int s, int m, std::span<const DirectionNumberRow> rows);
GeneratingMatrices sobol_matrices(int s, int m);  // embedded table

DigitalNet sobol_net(int s, int m, std::span<const DirectionNumberRow> rows);
DigitalNet sobol_net(int s, int m);

/// t-parameter guaranteed by the provenance of the direction numbers:
/// sum over coordinates of (polynomial degree - 1), with coordinate 1
/// counting as degree 1.
int sobol_t_parameter(int s, std::span<const DirectionNumberRow> rows);

/// Digit-interlaced net: output coordinate j collects its (a*d + r)-th digit
/// (a >= 0, 0 <= r < d) from digit a+1 of base coordinate j*d + r. The base
/// dimension must be divisible by d; output precision is min(53, d*n).
DigitalNet interlaced_net(const DigitalNet& base, int d);

/// True iff every elementary interval prod_j [a_j q^{-d_j}, (a_j+1) q^{-d_j})
/// contains exactly q^{m - sum d_j} net points. Requires sum d_j <= m.
bool elementary_interval_check(const DigitalNet& net, std::span<const int> exponents);

}  // namespace hqmc
