// Command-line front end: `dlms simulate ...` and `dlms compare ...`.

#include "dlms/config.hpp"
#include "dlms/experiment.hpp"
#include "dlms/metrics.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::vector<dlms::LearningCurve> read_curves(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return dlms::read_curves_csv(in);
}

const dlms::LearningCurve& pick(const std::vector<dlms::LearningCurve>& curves,
                                const std::string& algorithm, const std::string& path) {
  if (algorithm.empty()) {
    if (curves.size() != 1) {
      throw std::runtime_error("'" + path + "' holds " + std::to_string(curves.size()) +
                               " curves; choose one with --alg-a/--alg-b");
    }
    return curves.front();
  }
  for (const auto& c : curves) {
    if (c.algorithm == algorithm) return c;
  }
  throw std::runtime_error("'" + path + "' has no curve for '" + algorithm + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion LMS link-selection simulator"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  std::string scenario;
  std::string algorithms;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  simulate->add_option("--config", config_path, "Config file (JSON); defaults when omitted")
      ->check(CLI::ExistingFile);
  simulate->add_option("--set", sets, "Override a config key: key=value (dotted for nested)");
  simulate->add_option("--out", out_dir, "Output directory");
  auto* seed_opt = simulate->add_option("--seed", seed, "Master seed");
  simulate->add_option("--scenario", scenario, "static | time_varying");
  simulate->add_option("--algorithms", algorithms, "Comma list from atc,esls,sils");
  auto* workers_opt = simulate->add_option("--workers", workers, "Parallel runs (0 = all cores)");

  auto* compare = app.add_subcommand("compare", "Steady-state EMSE gain of curve B over curve A");
  std::string path_a;
  std::string path_b;
  std::string alg_a;
  std::string alg_b;
  double tail = 0.2;
  compare->add_option("--a", path_a, "Baseline learning-curve CSV")->required();
  compare->add_option("--b", path_b, "Candidate learning-curve CSV")->required();
  compare->add_option("--alg-a", alg_a, "Algorithm to take from A");
  compare->add_option("--alg-b", alg_b, "Algorithm to take from B");
  compare->add_option("--tail", tail, "Tail fraction of iterations")->check(CLI::Range(0.0, 1.0));

  CLI11_PARSE(app, argc, argv);

  if (*simulate) {
    dlms::ExperimentConfig config;
    try {
      std::vector<std::string> overrides = sets;
      if (!scenario.empty()) overrides.push_back("scenario=" + scenario);
      if (!algorithms.empty()) overrides.push_back("algorithms=" + algorithms);
      if (*seed_opt) overrides.push_back("seed=" + std::to_string(seed));
      if (*workers_opt) overrides.push_back("workers=" + std::to_string(workers));
      if (!out_dir.empty()) {
        overrides.push_back("output_dir=" + nlohmann::json(out_dir).dump());
      }
      config = config_path.empty() ? dlms::parse_config("", overrides)
                                   : dlms::load_config(config_path, overrides);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    try {
      const auto result = dlms::run_experiment(config);
      for (const auto& c : result.curves) {
        std::cout << c.algorithm << ": steady-state EMSE " << dlms::tail_mean(c.emse_db, 0.2)
                  << " dB\n";
      }
      std::cout << "results written to " << config.output_dir << '\n';
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
    return 0;
  }

  try {
    const auto curves_a = read_curves(path_a);
    const auto curves_b = read_curves(path_b);
    const auto& a = pick(curves_a, alg_a, path_a);
    const auto& b = pick(curves_b, alg_b, path_b);
    std::cout << dlms::format_double(dlms::compare_curves(a, b, tail)) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
