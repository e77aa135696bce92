#pragma once

#include <cmath>

namespace hqmc {

/// Neumaier-compensated accumulator. Adding terms in a fixed order gives a
/// reproducible, near-exact sum regardless of their magnitudes.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }

  double total() const { return sum + comp; }
};

}  // namespace hqmc
