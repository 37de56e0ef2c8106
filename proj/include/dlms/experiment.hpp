#pragma once

#include "dlms/config.hpp"
#include "dlms/metrics.hpp"
#include "dlms/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace dlms {

inline constexpr const char* kVersion = "1.0.0";

/// Seed of the generated topology: explicit, or derived from the master seed.
std::uint64_t topology_seed(const ExperimentConfig& config);

/// Generates the geometric topology or loads the configured edge list.
NetworkTopology build_topology(const ExperimentConfig& config);

/// Combiner for one algorithm over a fixed topology.
std::unique_ptr<Combiner> make_combiner(Algorithm algorithm, const ExperimentConfig& config,
                                        const NetworkTopology& topology,
                                        const CombinationMatrix& weights);

struct SilsStats {
  double max_sum_error = 0.0;
  std::uint64_t negative_coefficient_events = 0;
  std::uint64_t updates = 0;
};

/// Output of one Monte Carlo run: one record per configured algorithm.
struct RunOutput {
  std::vector<MetricsRecord> records;
  SilsStats sils;
  std::string esls_trace;  ///< CSV body rows, only for the traced run
  std::string sils_trace;
};

/// Runs every configured algorithm in lockstep over the same signal sample
/// path (common random numbers) for run `run_index`.
RunOutput simulate_run(const ExperimentConfig& config, const NetworkTopology& topology,
                       const CombinationMatrix& weights, std::size_t run_index);

struct ExperimentResult {
  NetworkTopology topology;
  std::vector<LearningCurve> curves;  ///< in config.algorithms order
  SilsStats sils;
  std::string esls_trace;
  std::string sils_trace;

  const LearningCurve& curve(Algorithm algorithm) const;
};

/// All runs, merged in run order. Output is independent of `workers`.
ExperimentResult run_simulation(const ExperimentConfig& config);

/// learning_curve.csv, topology.txt, manifest.json, plot_curves.py and the
/// requested traces, written into `dir`.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir);

/// run_simulation followed by write_outputs into config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace dlms
