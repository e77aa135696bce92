#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hqmc/rules.hpp"
#include "hqmc/wce.hpp"

namespace hqmc {

enum class InterlaceChoice { alpha, two_alpha_plus_one };

std::string to_string(InterlaceChoice choice);

/// Configuration of one convergence study (1-D).
struct StudyConfig {
  int alpha = 1;  // 1..3
  RuleFamily rule = RuleFamily::hodnet;
  int log2n_min = 6;
  int log2n_max = 14;
  std::uint64_t truncation = 100'000;
  InterlaceChoice interlace = InterlaceChoice::alpha;
  std::string direction_file = "embedded";

  void validate() const;
};

struct StudyRow {
  std::uint64_t n = 0;
  double wce = 0.0;
  double bias_term = 0.0;
  double tail_bound = 0.0;
  double seconds = 0.0;
};

struct ConvergenceStudy {
  StudyConfig config;
  std::vector<StudyRow> rows;  // sorted by n ascending
  double slope = 0.0;          // log2-log2 fit over the upper half of the range
};

/// Least-squares slope of log2(wce) against log2(N) over the second half of
/// the rows (suppresses pre-asymptotic transients at small N).
double fit_log2_slope_upper_half(std::span<const StudyRow> rows);

/// Builds the configured rule for each N = 2^j in the range, evaluates the
/// truncated Hermite-space worst-case error, and fits the convergence slope.
ConvergenceStudy run_study(const StudyConfig& config);

/// CSV with header "N,wce,bias,tail_bound,seconds", 17-significant-digit
/// decimals, and trailing '#' metadata lines recording the configuration and
/// the fitted slope.
void emit_csv(const ConvergenceStudy& study, std::ostream& out);

}  // namespace hqmc
