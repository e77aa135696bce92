#include "hqmc/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <doctest.h>

using namespace hqmc;

namespace {

// CSV with the wall-time field blanked; timings are the one column that is
// not reproducible between runs.
std::string mask_seconds(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.find("N,") != 0) {
      const std::size_t last = line.rfind(',');
      if (last != std::string::npos) line = line.substr(0, last) + ",*";
    }
    out += line + '\n';
  }
  return out;
}

std::string run_to_csv(const StudyConfig& config) {
  const ConvergenceStudy study = run_study(config);
  std::ostringstream out;
  emit_csv(study, out);
  return out.str();
}

}  // namespace

TEST_CASE("slope fit on synthetic data") {
  std::vector<StudyRow> rows;
  for (int j = 4; j <= 10; ++j) {
    StudyRow r;
    r.n = 1ULL << j;
    r.wce = std::pow(2.0, -1.5 * j);
    rows.push_back(r);
  }
  CHECK(fit_log2_slope_upper_half(rows) == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("config validation") {
  StudyConfig config;
  config.alpha = 4;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.alpha = 1;
  config.log2n_min = 8;
  config.log2n_max = 6;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.log2n_max = 10;
  config.rule = RuleFamily::gauss_hermite;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);  // 2^10 > 600 nodes
  config.log2n_max = 9;
  CHECK_NOTHROW(config.validate());
  config.rule = RuleFamily::custom;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.rule = RuleFamily::hodnet;
  config.truncation = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("hodnet study produces decreasing errors and shrinking bias") {
  StudyConfig config;
  config.alpha = 1;
  config.rule = RuleFamily::hodnet;
  config.log2n_min = 4;
  config.log2n_max = 9;
  config.truncation = 5000;
  const ConvergenceStudy study = run_study(config);
  REQUIRE(study.rows.size() == 6);
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    CHECK(study.rows[i].n == 2 * study.rows[i - 1].n);
    CHECK(study.rows[i].wce < study.rows[i - 1].wce);
    CHECK(study.rows[i].bias_term <= study.rows[i - 1].bias_term);
  }
  CHECK(study.slope < -0.5);
  CHECK(std::isfinite(study.slope));
}

TEST_CASE("icdf study runs and converges") {
  StudyConfig config;
  config.alpha = 2;
  config.rule = RuleFamily::icdf_qmc;
  config.log2n_min = 4;
  config.log2n_max = 8;
  config.truncation = 3000;
  const ConvergenceStudy study = run_study(config);
  REQUIRE(study.rows.size() == 5);
  CHECK(study.rows.back().wce < study.rows.front().wce);
}

TEST_CASE("gauss-hermite study with the 2a1 interlace flag ignores the net options") {
  StudyConfig config;
  config.alpha = 1;
  config.rule = RuleFamily::gauss_hermite;
  config.log2n_min = 1;
  config.log2n_max = 5;
  config.truncation = 2000;
  config.interlace = InterlaceChoice::two_alpha_plus_one;
  const ConvergenceStudy study = run_study(config);
  REQUIRE(study.rows.size() == 5);
  CHECK(study.rows.front().n == 2);
  CHECK(study.rows.back().n == 32);
}

TEST_CASE("csv format") {
  StudyConfig config;
  config.alpha = 1;
  config.rule = RuleFamily::hodnet;
  config.log2n_min = 4;
  config.log2n_max = 6;
  config.truncation = 500;
  const std::string csv = run_to_csv(config);
  CHECK(csv.rfind("N,wce,bias,tail_bound,seconds\n", 0) == 0);
  CHECK(csv.find("\n16,") != std::string::npos);
  CHECK(csv.find("# config: rule=hodnet alpha=1") != std::string::npos);
  CHECK(csv.find("# slope=") != std::string::npos);
}

TEST_CASE("direction numbers can come from a file on disk") {
  const std::string path = "joe_kuo_head_for_test.txt";
  {
    std::ofstream out(path);
    out << "d\ts\ta\tm_i\n"
        << "2\t1\t0\t1\n"
        << "3\t2\t1\t1 3\n"
        << "4\t3\t1\t1 3 1\n";
  }
  StudyConfig config;
  config.alpha = 3;
  config.rule = RuleFamily::hodnet;
  config.log2n_min = 4;
  config.log2n_max = 6;
  config.truncation = 500;
  const ConvergenceStudy embedded = run_study(config);
  config.direction_file = path;
  const ConvergenceStudy from_file = run_study(config);
  REQUIRE(from_file.rows.size() == embedded.rows.size());
  for (std::size_t i = 0; i < embedded.rows.size(); ++i) {
    CHECK(from_file.rows[i].wce == embedded.rows[i].wce);
  }
  config.direction_file = "no_such_file.txt";
  CHECK_THROWS_AS(run_study(config), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("identical configs give identical results across worker counts") {
  StudyConfig config;
  config.alpha = 2;
  config.rule = RuleFamily::hodnet;
  config.log2n_min = 5;
  config.log2n_max = 8;
  config.truncation = 2000;
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const std::string first = run_to_csv(config);
#ifdef _OPENMP
  omp_set_num_threads(3);
#endif
  const std::string second = run_to_csv(config);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
  CHECK(mask_seconds(first) == mask_seconds(second));
}
