#include "hqmc/nets.hpp"

#include <cstdint>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "test_support.hpp"

using namespace hqmc;

namespace {

GeneratingMatrices identity_matrices(int q, int m, int s) {
  GeneratingMatrices gm;
  gm.q = q;
  gm.n = m;
  gm.m = m;
  gm.s = s;
  gm.mats.assign(static_cast<std::size_t>(s),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(m) *
                                           static_cast<std::size_t>(m)));
  for (int j = 0; j < s; ++j) {
    for (int r = 0; r < m; ++r) gm.at(j, r, r) = 1;
  }
  return gm;
}

// Direction integers extended by the Sobol' recurrence exactly as in the
// widely used reference generator (32-bit fixed-point form).
std::vector<std::uint32_t> reference_direction_fixedpoint(const DirectionNumberRow& row,
                                                          int count) {
  std::vector<std::uint32_t> v(static_cast<std::size_t>(count) + 1, 0);
  const int e = row.degree;
  for (int i = 1; i <= count; ++i) {
    if (i <= e) {
      v[static_cast<std::size_t>(i)] = row.m[static_cast<std::size_t>(i - 1)] << (32 - i);
    } else {
      std::uint32_t vi = v[static_cast<std::size_t>(i - e)] ^
                         (v[static_cast<std::size_t>(i - e)] >> e);
      for (int k = 1; k <= e - 1; ++k) {
        if ((row.a >> (e - 1 - k)) & 1U) vi ^= v[static_cast<std::size_t>(i - k)];
      }
      v[static_cast<std::size_t>(i)] = vi;
    }
  }
  return v;
}

}  // namespace

TEST_CASE("net_point hand case and origin") {
  GeneratingMatrices gm;
  gm.q = 2;
  gm.n = 1;
  gm.m = 1;
  gm.s = 1;
  gm.mats = {{1}};
  const DigitalNet net(gm);
  CHECK(net.size() == 2);
  CHECK(net.point(0)[0] == 0.0);
  CHECK(net.point(1)[0] == 0.5);
  CHECK_THROWS_AS(net.point(2), std::out_of_range);
}

TEST_CASE("identity matrices reproduce the radical inverse") {
  {
    const DigitalNet net(identity_matrices(2, 8, 2));
    for (std::uint64_t h = 0; h < net.size(); ++h) {
      const auto p = net.point(h);
      CHECK(p[0] == testsupport::van_der_corput(h, 2));  // exact dyadic values
      CHECK(p[1] == testsupport::van_der_corput(h, 2));
    }
  }
  {
    const DigitalNet net(identity_matrices(3, 4, 1));
    CHECK(net.size() == 81);
    for (std::uint64_t h = 0; h < net.size(); ++h) {
      CHECK(net.point(h)[0] ==
            doctest::Approx(testsupport::van_der_corput(h, 3)).epsilon(1e-15));
    }
  }
}

TEST_CASE("points are exact n-digit fractions that re-encode to the digits") {
  const DigitalNet net = sobol_net(3, 7);
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(net.precision()));
  for (std::uint64_t h = 0; h < net.size(); h += 5) {
    const auto p = net.point(h);
    for (int j = 0; j < net.dimension(); ++j) {
      net.point_digits(h, j, digits);
      double v = p[static_cast<std::size_t>(j)];
      for (int r = 0; r < net.precision(); ++r) {
        v *= 2.0;
        const auto bit = static_cast<std::uint8_t>(v);
        CHECK(bit == digits[static_cast<std::size_t>(r)]);
        v -= bit;
      }
      CHECK(v == 0.0);
    }
  }
}

TEST_CASE("direction number parsing errors carry line numbers") {
  {
    std::istringstream in("d s a m_i\n2 1 0 1\nbroken line\n");
    try {
      parse_direction_numbers(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  {
    std::istringstream in("d s a m_i\n2 1 0 4\n");  // m_1 must be odd
    CHECK_THROWS_AS(parse_direction_numbers(in), ParseError);
  }
  {
    std::istringstream in("d s a m_i\n3 2 1 1 3 9\n");  // trailing token
    CHECK_THROWS_AS(parse_direction_numbers(in), ParseError);
  }
}

TEST_CASE("requesting more dimensions than the table carries fails") {
  CHECK_THROWS_AS(sobol_matrices(50, 5), std::out_of_range);
}

TEST_CASE("first Sobol' coordinate is the van der Corput sequence") {
  const DigitalNet net = sobol_net(4, 10);
  for (std::uint64_t h = 0; h < 1024; ++h) {
    CHECK(net.point(h)[0] == testsupport::van_der_corput(h, 2));
  }
}

TEST_CASE("Sobol' columns match the fixed-point reference recurrence") {
  const int m = 10;
  const GeneratingMatrices gm = sobol_matrices(4, m);
  for (const DirectionNumberRow& row : embedded_direction_numbers()) {
    if (row.dim > 4) continue;
    const auto v = reference_direction_fixedpoint(row, m);
    for (int col = 0; col < m; ++col) {
      for (int r = 0; r < m; ++r) {
        const std::uint8_t expected =
            static_cast<std::uint8_t>((v[static_cast<std::size_t>(col + 1)] >> (31 - r)) & 1U);
        CHECK(gm.at(row.dim - 1, r, col) == expected);
      }
    }
  }
  // spot check: dimension 2 direction integers extend as 1, 3, 5, 15, 17, 51
  const auto v2 = reference_direction_fixedpoint(embedded_direction_numbers()[0], 6);
  const std::vector<std::uint32_t> expected_m{1, 3, 5, 15, 17, 51};
  for (int i = 1; i <= 6; ++i) {
    CHECK((v2[static_cast<std::size_t>(i)] >> (32 - i)) ==
          expected_m[static_cast<std::size_t>(i - 1)]);
  }
}

TEST_CASE("matrix dump/restore round-trips bit-exactly") {
  const GeneratingMatrices gm = sobol_matrices(3, 9);
  std::stringstream buffer;
  gm.dump(buffer);
  const GeneratingMatrices back = GeneratingMatrices::restore(buffer);
  CHECK(back.q == gm.q);
  CHECK(back.n == gm.n);
  CHECK(back.m == gm.m);
  CHECK(back.s == gm.s);
  CHECK(back.mats == gm.mats);
}

TEST_CASE("interlacing") {
  SUBCASE("factor 1 is the identity") {
    const DigitalNet base = sobol_net(2, 6);
    const DigitalNet inter = interlaced_net(base, 1);
    for (std::uint64_t h = 0; h < base.size(); ++h) {
      CHECK(inter.point(h) == base.point(h));
    }
  }
  SUBCASE("hand-woven bits") {
    GeneratingMatrices gm;
    gm.q = 2;
    gm.n = 1;
    gm.m = 1;
    gm.s = 2;
    gm.mats = {{1}, {0}};
    const DigitalNet base(gm);
    const DigitalNet inter = interlaced_net(base, 2);
    // base point 1 is (0.5, 0.0) = (0.1, 0.0)_2 -> woven 0.10_2 = 0.5
    CHECK(inter.dimension() == 1);
    CHECK(inter.precision() == 2);
    CHECK(inter.point(1)[0] == 0.5);
    CHECK(inter.point(0)[0] == 0.0);
  }
  SUBCASE("point count preserved and digits recoverable") {
    const DigitalNet base = sobol_net(4, 6);
    const DigitalNet inter = interlaced_net(base, 2);
    CHECK(inter.size() == base.size());
    CHECK(inter.dimension() == 2);
    CHECK(inter.precision() == 12);
    std::vector<std::uint8_t> wov(12), orig(6);
    for (std::uint64_t h = 0; h < base.size(); ++h) {
      for (int j = 0; j < 2; ++j) {
        inter.point_digits(h, j, wov);
        for (int r = 0; r < 2; ++r) {
          base.point_digits(h, j * 2 + r, orig);
          for (int a = 0; a < 6; ++a) {
            CHECK(wov[static_cast<std::size_t>(a * 2 + r)] == orig[static_cast<std::size_t>(a)]);
          }
        }
      }
    }
  }
  SUBCASE("dimension must divide") {
    const DigitalNet base = sobol_net(3, 4);
    CHECK_THROWS_AS(interlaced_net(base, 2), std::invalid_argument);
  }
}

TEST_CASE("elementary interval checks") {
  SUBCASE("van der Corput fills every dyadic interval once") {
    const DigitalNet net(identity_matrices(2, 4, 1));
    const std::vector<int> d{4};
    CHECK(elementary_interval_check(net, d));
  }
  SUBCASE("Sobol' dimensions 1-2 are a (0, 8, 2)-net") {
    const DigitalNet net = sobol_net(2, 8);
    const std::vector<int> d{4, 4};
    CHECK(elementary_interval_check(net, d));
    for (int d1 = 0; d1 <= 8; ++d1) {
      const std::vector<int> part{d1, 8 - d1};
      CHECK(elementary_interval_check(net, part));
    }
  }
  SUBCASE("random matrices fail tight partitions") {
    testsupport::Rng rng(99);
    GeneratingMatrices gm = identity_matrices(2, 8, 2);
    for (auto& mat : gm.mats) {
      for (auto& e : mat) e = static_cast<std::uint8_t>(rng.next_u64() & 1U);
    }
    const DigitalNet net(gm);
    const std::vector<int> d{4, 4};
    CHECK_FALSE(elementary_interval_check(net, d));
  }
  SUBCASE("exponent validation") {
    const DigitalNet net = sobol_net(2, 4);
    const std::vector<int> too_much{3, 2};
    CHECK_THROWS_AS(elementary_interval_check(net, too_much), std::invalid_argument);
  }
}

TEST_CASE("t parameter from direction-number provenance") {
  const auto& rows = embedded_direction_numbers();
  CHECK(sobol_t_parameter(1, rows) == 0);
  CHECK(sobol_t_parameter(2, rows) == 0);
  CHECK(sobol_t_parameter(3, rows) == 1);
  CHECK(sobol_t_parameter(4, rows) == 3);
}

TEST_CASE("parallel point generation equals sequential") {
  const DigitalNet net = sobol_net(3, 8);
  const std::vector<double> all = net.all_points();
  for (std::uint64_t h = 0; h < net.size(); ++h) {
    const auto p = net.point(h);
    for (int j = 0; j < 3; ++j) {
      CHECK(all[static_cast<std::size_t>(h) * 3 + static_cast<std::size_t>(j)] ==
            p[static_cast<std::size_t>(j)]);
    }
  }
}
