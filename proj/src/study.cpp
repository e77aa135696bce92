#include "hqmc/study.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "hqmc/nets.hpp"

namespace hqmc {

std::string to_string(InterlaceChoice choice) {
  return choice == InterlaceChoice::alpha ? "alpha" : "2a1";
}

void StudyConfig::validate() const {
  if (alpha < 1 || alpha > 3) throw std::invalid_argument("study: alpha must be in [1, 3]");
  if (log2n_min < 1 || log2n_max < log2n_min || log2n_max > 40) {
    throw std::invalid_argument("study: log2n range is empty or out of bounds");
  }
  if (truncation < 1) throw std::invalid_argument("study: truncation must be >= 1");
  if (rule == RuleFamily::gauss_hermite && (1 << log2n_max) > max_gauss_hermite_size) {
    throw std::invalid_argument("study: gauss-hermite supports N up to " +
                                std::to_string(max_gauss_hermite_size));
  }
  if (rule == RuleFamily::custom) throw std::invalid_argument("study: unknown rule family");
}

double fit_log2_slope_upper_half(std::span<const StudyRow> rows) {
  const std::size_t begin = rows.size() / 2;
  const std::size_t count = rows.size() - begin;
  if (count < 2) throw std::invalid_argument("slope fit: need at least two rows");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = begin; i < rows.size(); ++i) {
    mx += std::log2(static_cast<double>(rows[i].n));
    my += std::log2(rows[i].wce);
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = begin; i < rows.size(); ++i) {
    const double dx = std::log2(static_cast<double>(rows[i].n)) - mx;
    const double dy = std::log2(rows[i].wce) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  return sxy / sxx;
}

namespace {

std::vector<DirectionNumberRow> load_directions(const StudyConfig& config) {
  if (config.direction_file == "embedded") return embedded_direction_numbers();
  std::ifstream in(config.direction_file);
  if (!in) throw std::runtime_error("study: cannot open direction file " + config.direction_file);
  return parse_direction_numbers(in);
}

PointSet interlaced_points(const StudyConfig& config,
                           std::span<const DirectionNumberRow> directions, int log2n) {
  const int d = config.interlace == InterlaceChoice::alpha ? config.alpha : 2 * config.alpha + 1;
  const DigitalNet base = sobol_net(d, log2n, directions);
  return PointSet::from_net(interlaced_net(base, d));
}

// For the inverse-CDF family the all-zero first net point is dropped instead
// of displaced: a displaced origin maps to a node several sigma out whose
// effective weight puts a near-constant floor under the worst-case error.
PointSet without_origin(PointSet points) {
  points.pts.erase(points.pts.begin(), points.pts.begin() + points.s);
  return points;
}

QuadratureRule build_rule(const StudyConfig& config,
                          std::span<const DirectionNumberRow> directions, int log2n) {
  switch (config.rule) {
    case RuleFamily::hodnet: {
      const HermiteSpaceParams params{1, config.alpha};
      return hodnet_rule(params, interlaced_points(config, directions, log2n));
    }
    case RuleFamily::gauss_hermite:
      return gauss_hermite(1 << log2n);
    case RuleFamily::icdf_qmc:
      return icdf_rule(without_origin(interlaced_points(config, directions, log2n)));
    case RuleFamily::custom:
      break;
  }
  throw std::invalid_argument("study: unknown rule family");
}

}  // namespace

ConvergenceStudy run_study(const StudyConfig& config) {
  config.validate();
  const std::vector<DirectionNumberRow> directions = load_directions(config);
  ConvergenceStudy study;
  study.config = config;
  for (int j = config.log2n_min; j <= config.log2n_max; ++j) {
    const auto start = std::chrono::steady_clock::now();
    QuadratureRule rule = [&] {
      try {
        return build_rule(config, directions, j);
      } catch (const std::exception& e) {
        throw std::runtime_error("study: building " + to_string(config.rule) + " rule for N=2^" +
                                 std::to_string(j) + " failed: " + e.what());
      }
    }();
    WceReport report;
    try {
      report = wce_hermite_1d(config.alpha, rule, config.truncation);
    } catch (const std::exception& e) {
      throw std::runtime_error("study: evaluating " + to_string(config.rule) + " rule for N=2^" +
                               std::to_string(j) + " failed: " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    StudyRow row;
    row.n = 1ULL << j;
    row.wce = report.value;
    row.bias_term = report.bias_term;
    row.tail_bound = report.tail_bound;
    row.seconds = std::chrono::duration<double>(stop - start).count();
    study.rows.push_back(row);
  }
  study.slope = fit_log2_slope_upper_half(study.rows);
  return study;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

}  // namespace

void emit_csv(const ConvergenceStudy& study, std::ostream& out) {
  out << "N,wce,bias,tail_bound,seconds\n";
  std::string line;
  for (const StudyRow& row : study.rows) {
    line.clear();
    line += std::to_string(row.n);
    line += ',';
    append_double(line, row.wce);
    line += ',';
    append_double(line, row.bias_term);
    line += ',';
    append_double(line, row.tail_bound);
    line += ',';
    append_double(line, row.seconds);
    line += '\n';
    out << line;
  }
  const StudyConfig& c = study.config;
  out << "# config: rule=" << to_string(c.rule) << " alpha=" << c.alpha
      << " log2n_min=" << c.log2n_min << " log2n_max=" << c.log2n_max
      << " truncation=" << c.truncation << " interlace=" << to_string(c.interlace)
      << " direction_file=" << c.direction_file << '\n';
  line = "# slope=";
  append_double(line, study.slope);
  line += '\n';
  out << line;
}

}  // namespace hqmc
