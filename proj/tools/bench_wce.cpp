// Timing comparison of the blocked (OpenMP) worst-case-error kernel against
// the plain serial reference, over a realistic cube-mapped net rule.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqmc/nets.hpp"
#include "hqmc/rules.hpp"
#include "hqmc/wce.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int log2n = argc > 1 ? std::atoi(argv[1]) : 12;
  const std::uint64_t m = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 200'000;
  const int alpha = 2;

  const hqmc::DigitalNet base = hqmc::sobol_net(alpha, log2n);
  const hqmc::PointSet pts = hqmc::PointSet::from_net(hqmc::interlaced_net(base, alpha));
  const hqmc::QuadratureRule rule = hqmc::hodnet_rule(hqmc::HermiteSpaceParams{1, alpha}, pts);

  std::printf("wce kernel benchmark: N=%zu nodes, m=%llu series terms, alpha=%d\n", rule.size(),
              static_cast<unsigned long long>(m), alpha);

  auto start = std::chrono::steady_clock::now();
  const hqmc::WceReport serial = hqmc::wce_hermite_1d_serial(alpha, rule, m);
  const double t_serial = seconds_since(start);
  std::printf("%-22s %10.3fs   e_m = %.12e\n", "serial reference", t_serial, serial.value);

#ifdef _OPENMP
  const int max_threads = omp_get_num_procs();
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    start = std::chrono::steady_clock::now();
    const hqmc::WceReport blocked = hqmc::wce_hermite_1d(alpha, rule, m);
    const double t = seconds_since(start);
    std::printf("blocked, %2d thread(s)  %10.3fs   e_m = %.12e   speedup %.2fx   |diff| %.3e\n",
                threads, t, blocked.value, t_serial / t, std::abs(blocked.value - serial.value));
  }
#else
  start = std::chrono::steady_clock::now();
  const hqmc::WceReport blocked = hqmc::wce_hermite_1d(alpha, rule, m);
  const double t = seconds_since(start);
  std::printf("%-22s %10.3fs   e_m = %.12e   speedup %.2fx   |diff| %.3e\n", "blocked", t,
              blocked.value, t_serial / t, std::abs(blocked.value - serial.value));
#endif
  return 0;
}
