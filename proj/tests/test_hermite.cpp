#include "hqmc/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hqmc/rules.hpp"
#include "test_support.hpp"

using namespace hqmc;

namespace {
const double inv_root2 = 1.0 / std::sqrt(2.0);
const double quarter_root_2pi = std::pow(2.0 * M_PI, -0.25);
}  // namespace

TEST_CASE("hermite low-degree values") {
  CHECK(hermite(0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hermite(2, 0.0) == doctest::Approx(-inv_root2).epsilon(1e-15));
  CHECK(hermite(3, 2.0) == doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-15));
}

TEST_CASE("hermite matches the explicit polynomials for k <= 3") {
  for (double x = -2.0; x <= 2.0; x += 0.125) {
    CHECK(std::abs(hermite(0, x) - 1.0) <= 1e-14);
    CHECK(std::abs(hermite(1, x) - x) <= 1e-14);
    CHECK(std::abs(hermite(2, x) - (x * x - 1.0) * inv_root2) <= 1e-14);
    CHECK(std::abs(hermite(3, x) - (x * x * x - 3.0 * x) / std::sqrt(6.0)) <= 1e-14);
  }
}

TEST_CASE("hermite degree limit") {
  CHECK_THROWS_AS(hermite(101, 0.3, 100), std::out_of_range);
  CHECK_NOTHROW(hermite(100, 0.3, 100));
}

TEST_CASE("hermite_weighted values") {
  CHECK(hermite_weighted(0, 0.0) == doctest::Approx(quarter_root_2pi).epsilon(1e-15));
  CHECK(hermite_weighted(1, 1.0) ==
        doctest::Approx(quarter_root_2pi * std::exp(-0.25)).epsilon(1e-15));
  // consistency with the bare polynomial in a safe range
  for (double x : {-3.0, -0.5, 0.9, 4.0}) {
    for (std::uint64_t k : {0u, 1u, 5u, 23u}) {
      CHECK(hermite_weighted(k, x) ==
            doctest::Approx(hermite(k, x) * sqrt_gaussian_density(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Cramer and Lemma-1 bounds on the exhaustive grid") {
  const double sqrt_pi = std::sqrt(M_PI);
  std::size_t violations = 0;
  for (int xi = -2000; xi <= 2000; ++xi) {
    const double x = 0.01 * xi;
    WeightedHermiteSeries psi(x);
    for (std::uint64_t k = 0; k <= 200; ++k) {
      const double v = std::abs(psi.current());
      if (v > 1.0) ++violations;
      if (k >= 1 && v > std::min(1.0, sqrt_pi / std::pow(static_cast<double>(k), 1.0 / 12.0))) {
        ++violations;
      }
      psi.advance();
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("Cramer bound holds for randomized large degrees") {
  testsupport::Rng rng(20250808);
  for (int rep = 0; rep < 4; ++rep) {
    const auto k = static_cast<std::uint64_t>(rng.next_range(1e4, 1e6));
    const double x = rng.next_range(-50.0, 50.0);
    const double v = std::abs(hermite_weighted(k, x));
    CHECK(v <= 1.0);
    CHECK(v <= std::min(1.0, std::sqrt(M_PI) / std::pow(static_cast<double>(k), 1.0 / 12.0)));
  }
}

TEST_CASE("hermite_multi") {
  {
    const std::vector<std::uint64_t> k{0, 0};
    const std::vector<double> x{3.1, -2.0};
    CHECK(hermite_multi(k, x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  {
    const std::vector<std::uint64_t> k{1, 1};
    const std::vector<double> x{0.7, -1.3};
    CHECK(hermite_multi(k, x) == doctest::Approx(0.7 * -1.3).epsilon(1e-15));
  }
  {
    const std::vector<std::uint64_t> k{2, 0};
    const std::vector<double> x{0.0, 5.0};
    CHECK(hermite_multi(k, x) == doctest::Approx(-inv_root2).epsilon(1e-15));
  }
  const std::vector<std::uint64_t> k{1};
  const std::vector<double> x{0.0, 1.0};
  CHECK_THROWS_AS(hermite_multi(k, x), std::invalid_argument);
}

TEST_CASE("sigma_bound") {
  {
    const std::vector<std::uint64_t> k{0, 0, 0};
    CHECK(sigma_bound(k) == 1.0);
  }
  {
    const std::vector<std::uint64_t> k{1};
    CHECK(sigma_bound(k) == 1.0);  // sqrt(pi) > 1, so the min clamps
  }
  {
    const std::vector<std::uint64_t> k{1'000'000'000'000ULL};
    CHECK(sigma_bound(k) == doctest::Approx(std::sqrt(M_PI) * 0.1).epsilon(1e-12));
  }
}

TEST_CASE("hermite_derivative_factor") {
  CHECK(hermite_derivative_factor(5, 0) == 1.0);
  CHECK(hermite_derivative_factor(3, 3) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(hermite_derivative_factor(2, 5) == 0.0);
  // log-domain path agrees with an extended-precision direct product
  const std::uint64_t k = 100'000'000;
  const std::uint64_t tau = 40;
  long double prod = 1.0L;
  for (std::uint64_t t = 0; t < tau; ++t) prod *= static_cast<long double>(k - t);
  const double expected = static_cast<double>(sqrtl(prod));
  CHECK(hermite_derivative_factor(k, tau) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("derivative identity against finite differences") {
  for (std::uint64_t k = 0; k <= 20; ++k) {
    for (std::uint64_t tau = 0; tau <= 3; ++tau) {
      for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const double fd = testsupport::fd_derivative(
            [k](double t) { return hermite(k, t); }, x, static_cast<int>(tau), 1e-3);
        const double exact = (tau <= k)
                                 ? hermite_derivative_factor(k, tau) * hermite(k - tau, x)
                                 : 0.0;
        CHECK(std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("orthonormality under Gauss-Hermite quadrature") {
  const QuadratureRule rule = gauss_hermite(31);
  for (std::uint64_t k = 0; k <= 30; ++k) {
    for (std::uint64_t l = k; l <= 30; ++l) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double x = rule.node(i)[0];
        sum += rule.weight(i) * hermite(k, x) * hermite(l, x);
      }
      const double expected = (k == l) ? 1.0 : 0.0;
      CHECK(std::abs(sum - expected) <= 1e-10);
    }
  }
}

TEST_CASE("gaussian density") {
  CHECK(gaussian_density(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
  const std::vector<double> x{0.0, 0.0, 0.0};
  CHECK(gaussian_density(x) == doctest::Approx(std::pow(2.0 * M_PI, -1.5)).epsilon(1e-15));
  const std::vector<double> y{1.0, -2.0};
  CHECK(gaussian_density(y) ==
        doctest::Approx(gaussian_density(1.0) * gaussian_density(-2.0)).epsilon(1e-14));
}
