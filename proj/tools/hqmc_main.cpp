#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hqmc/study.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 2;
constexpr int exit_numeric_error = 3;

int run(const hqmc::StudyConfig& config, const std::string& output) {
  const hqmc::ConvergenceStudy study = hqmc::run_study(config);
  for (const hqmc::StudyRow& row : study.rows) {
    if (!std::isfinite(row.wce) || !std::isfinite(row.bias_term)) {
      std::cerr << "hqmc: non-finite result at N=" << row.n << "\n";
      return exit_numeric_error;
    }
  }
  if (output.empty()) {
    hqmc::emit_csv(study, std::cout);
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "hqmc: cannot open output file " << output << "\n";
      return exit_config_error;
    }
    hqmc::emit_csv(study, out);
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Convergence studies for Gaussian-measure quadrature: worst-case errors in "
      "1-D Hermite spaces of finite smoothness for cube-mapped higher-order digital "
      "nets, Gauss-Hermite rules, and inverse-CDF QMC."};

  hqmc::StudyConfig config;
  std::string rule_name = "hodnet";
  std::string interlace_name = "alpha";
  std::string output;
  bool full = false;

  app.add_option("--alpha", config.alpha, "Smoothness parameter (1..3)")
      ->capture_default_str();
  app.add_option("--rule", rule_name, "Rule family: hodnet | gauss-hermite | icdf-qmc")
      ->check(CLI::IsMember({"hodnet", "gauss-hermite", "icdf-qmc"}))
      ->capture_default_str();
  app.add_option("--log2n-min", config.log2n_min, "Smallest study size as log2(N)")
      ->capture_default_str();
  app.add_option("--log2n-max", config.log2n_max, "Largest study size as log2(N)")
      ->capture_default_str();
  auto* trunc_opt =
      app.add_option("--truncation", config.truncation, "Series truncation index m")
          ->capture_default_str();
  app.add_option("--interlace", interlace_name,
                 "Interlacing factor: alpha | 2a1 (i.e. 2*alpha+1)")
      ->check(CLI::IsMember({"alpha", "2a1"}))
      ->capture_default_str();
  app.add_option("--direction-file", config.direction_file,
                 "Joe-Kuo direction-number file, or 'embedded'")
      ->capture_default_str();
  app.add_option("--output", output, "CSV output path (default: stdout)");
  app.add_flag("--full", full, "Full-fidelity truncation m = 5e7");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config_error;
  }

  if (full && trunc_opt->count() == 0) config.truncation = 50'000'000;
  config.rule = rule_name == "hodnet"          ? hqmc::RuleFamily::hodnet
                : rule_name == "gauss-hermite" ? hqmc::RuleFamily::gauss_hermite
                                               : hqmc::RuleFamily::icdf_qmc;
  config.interlace = interlace_name == "alpha" ? hqmc::InterlaceChoice::alpha
                                               : hqmc::InterlaceChoice::two_alpha_plus_one;

  try {
    return run(config, output);
  } catch (const std::invalid_argument& e) {
    std::cerr << "hqmc: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::length_error& e) {
    std::cerr << "hqmc: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "hqmc: " << e.what() << "\n";
    return exit_numeric_error;
  }
}
