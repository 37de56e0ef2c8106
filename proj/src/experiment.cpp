#include "dlms/experiment.hpp"

#include "dlms/diffusion.hpp"
#include "dlms/esls.hpp"
#include "dlms/rng.hpp"
#include "dlms/signal.hpp"
#include "dlms/sils.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dlms {

namespace {

constexpr std::uint64_t kTopologyStream = 0x544f504fULL;

SignalSettings signal_settings(const ExperimentConfig& c) {
  SignalSettings s;
  s.filter_length = c.filter_len;
  s.noise_variance = c.noise_var;
  s.ar_coeff_min = c.ar_coeff_min;
  s.ar_coeff_max = c.ar_coeff_max;
  s.mode = c.scenario == Scenario::Static ? TruthMode::Static : TruthMode::Markov;
  s.markov_std = c.markov_std;
  s.real_valued = c.real_valued;
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plot network EMSE learning curves from learning_curve.csv."""
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
source = Path(sys.argv[1]) if len(sys.argv) > 1 else here / "learning_curve.csv"
target = Path(sys.argv[2]) if len(sys.argv) > 2 else here / "emse.png"

curves = defaultdict(lambda: ([], []))
with open(source, newline="") as fh:
    for row in csv.DictReader(fh):
        xs, ys = curves[row["algorithm"]]
        xs.append(int(row["iteration"]))
        ys.append(float(row["emse_db"]))

fig, ax = plt.subplots(figsize=(7, 4.5))
for name, (xs, ys) in curves.items():
    ax.plot(xs, ys, label=name.upper(), linewidth=1.2)
ax.set_xlabel("iteration")
ax.set_ylabel("network EMSE (dB)")
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(target, dpi=150)
print(f"wrote {target}")
)PY";

}  // namespace

std::uint64_t topology_seed(const ExperimentConfig& config) {
  return config.topology.seed ? *config.topology.seed
                              : splitmix64(config.seed ^ splitmix64(kTopologyStream));
}

NetworkTopology build_topology(const ExperimentConfig& config) {
  if (!config.topology.edge_list.empty()) {
    std::ifstream in(config.topology.edge_list);
    if (!in) throw std::runtime_error("cannot open edge list '" + config.topology.edge_list + "'");
    return read_edge_list(in, config.n_nodes);
  }
  return generate_random_geometric(config.n_nodes, config.topology.radius, topology_seed(config));
}

std::unique_ptr<Combiner> make_combiner(Algorithm algorithm, const ExperimentConfig& config,
                                        const NetworkTopology& topology,
                                        const CombinationMatrix& weights) {
  switch (algorithm) {
    case Algorithm::Atc:
      return std::make_unique<AtcCombiner>(topology, weights);
    case Algorithm::Esls:
      return std::make_unique<EslsCombiner>(
          topology, weights,
          EslsOptions{config.esls.renormalize, config.esls.require_self,
                      config.esls.max_neighborhood});
    case Algorithm::Sils:
      return std::make_unique<SilsCombiner>(
          topology, weights, config.sils_params(),
          SilsOptions{config.sils.persist_coeffs, config.sils.clamp});
  }
  throw std::logic_error("unknown algorithm");
}

RunOutput simulate_run(const ExperimentConfig& config, const NetworkTopology& topology,
                       const CombinationMatrix& weights, std::size_t run_index) {
  const std::size_t n = topology.size();
  const std::size_t iterations = config.iterations;
  SignalSource signals(signal_settings(config), n, derive_run_seed(config.seed, run_index));

  std::vector<DiffusionNetwork> networks;
  RunOutput out;
  for (Algorithm a : config.algorithms) {
    networks.emplace_back(topology, make_combiner(a, config, topology, weights),
                          config.resolved_step_sizes(), config.filter_len);
    out.records.emplace_back(to_string(a), run_index, iterations, n);
  }

  const bool traced = run_index == config.trace.run;
  std::ostringstream esls_trace;
  std::ostringstream sils_trace;

  for (std::size_t i = 0; i < iterations; ++i) {
    signals.step();
    const CVector& truth = signals.truth().omega0;
    const auto& x = signals.regressors();
    for (std::size_t a = 0; a < networks.size(); ++a) {
      DiffusionNetwork& net = networks[a];
      MetricsRecord& record = out.records[a];
      std::vector<double> emse(n);
      for (std::size_t k = 0; k < n; ++k) emse[k] = apriori_error(truth, net.estimates()[k], x[k]);
      net.iterate(x, signals.measurements());
      for (std::size_t k = 0; k < n; ++k) {
        record.set(i, k, emse[k], squared_deviation(truth, net.estimates()[k]));
      }
      if (!traced) continue;
      if (config.trace.esls && config.algorithms[a] == Algorithm::Esls) {
        const auto& esls = static_cast<const EslsCombiner&>(net.combiner());
        for (std::size_t k = 0; k < n; ++k) {
          esls_trace << i << ',' << k << ',' << esls.last_selection(k).mask << '\n';
        }
      }
      if (config.trace.sils && config.algorithms[a] == Algorithm::Sils) {
        const auto& sils = static_cast<const SilsCombiner&>(net.combiner());
        for (std::size_t k = 0; k < n; ++k) {
          const auto& nb = sils.neighbors(k);
          const auto& coeffs = sils.coefficients(k);
          for (std::size_t j = 0; j < nb.size(); ++j) {
            sils_trace << i << ',' << k << ',' << nb[j] << ',' << format_double(coeffs[j]) << '\n';
          }
        }
      }
    }
    signals.advance_truth();
  }

  for (std::size_t a = 0; a < networks.size(); ++a) {
    if (config.algorithms[a] != Algorithm::Sils) continue;
    const auto& sils = static_cast<const SilsCombiner&>(networks[a].combiner());
    out.sils = {sils.max_sum_error(), sils.negative_coefficient_events(), sils.updates()};
  }
  out.esls_trace = esls_trace.str();
  out.sils_trace = sils_trace.str();
  return out;
}

const LearningCurve& ExperimentResult::curve(Algorithm algorithm) const {
  const std::string name = to_string(algorithm);
  for (const auto& c : curves) {
    if (c.algorithm == name) return c;
  }
  throw std::out_of_range("no curve for algorithm '" + name + "'");
}

ExperimentResult run_simulation(const ExperimentConfig& config) {
  validate(config);
  NetworkTopology topology = build_topology(config);
  const CombinationMatrix weights = metropolis_weights(topology);
  // Surface configuration problems (e.g. the ESLS neighborhood cap) before
  // spawning workers.
  for (Algorithm a : config.algorithms) make_combiner(a, config, topology, weights);

  std::vector<CurveAccumulator> accumulators;
  for (Algorithm a : config.algorithms) {
    accumulators.emplace_back(to_string(a), config.iterations, topology.size());
  }

  std::size_t workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.runs);

  ExperimentResult result{topology, {}, {}, {}, {}};
  std::vector<RunOutput> batch(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t first = 0; first < config.runs; first += workers) {
    const std::size_t count = std::min(workers, config.runs - first);
    {
      std::vector<std::jthread> threads;
      for (std::size_t w = 0; w < count; ++w) {
        threads.emplace_back([&, w] {
          try {
            batch[w] = simulate_run(config, topology, weights, first + w);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (std::size_t w = 0; w < count; ++w) {
      if (errors[w]) std::rethrow_exception(errors[w]);
      RunOutput& run = batch[w];
      for (std::size_t a = 0; a < accumulators.size(); ++a) accumulators[a].add(run.records[a]);
      result.sils.max_sum_error = std::max(result.sils.max_sum_error, run.sils.max_sum_error);
      result.sils.negative_coefficient_events += run.sils.negative_coefficient_events;
      result.sils.updates += run.sils.updates;
      if (first + w == config.trace.run) {
        result.esls_trace = std::move(run.esls_trace);
        result.sils_trace = std::move(run.sils_trace);
      }
      run = RunOutput{};
    }
  }
  for (const auto& acc : accumulators) result.curves.push_back(acc.finish());
  return result;
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  std::ostringstream csv;
  write_curves_csv(csv, result.curves);
  write_file(dir / "learning_curve.csv", csv.str());

  std::ostringstream edges;
  write_edge_list(edges, result.topology);
  write_file(dir / "topology.txt", edges.str());

  std::vector<std::string> outputs{"learning_curve.csv", "topology.txt", "manifest.json",
                                   "plot_curves.py"};
  const bool has_esls = std::find(config.algorithms.begin(), config.algorithms.end(),
                                  Algorithm::Esls) != config.algorithms.end();
  const bool has_sils = std::find(config.algorithms.begin(), config.algorithms.end(),
                                  Algorithm::Sils) != config.algorithms.end();
  if (config.trace.esls && has_esls) {
    write_file(dir / "esls_trace.csv", "iteration,node,subset_mask\n" + result.esls_trace);
    outputs.push_back("esls_trace.csv");
  }
  if (config.trace.sils && has_sils) {
    write_file(dir / "sils_trace.csv", "iteration,node,neighbor,coefficient\n" + result.sils_trace);
    outputs.push_back("sils_trace.csv");
  }

  nlohmann::json edge_list = nlohmann::json::array();
  for (const auto& [k, l] : result.topology.edges()) edge_list.push_back({k, l});
  nlohmann::json steady = nlohmann::json::object();
  for (const auto& c : result.curves) {
    steady[c.algorithm] = tail_mean(c.emse_db, 0.2);
  }
  nlohmann::json manifest = {
      {"program", "dlms"},
      {"version", kVersion},
      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
      {"config", to_json(config)},
      {"resolved",
       {{"sils_rho", config.resolved_rho()},
        {"step_sizes", config.resolved_step_sizes()},
        {"topology_seed", topology_seed(config)},
        {"run_seed_derivation", "splitmix64(splitmix64(seed) ^ splitmix64(run + 0x52554e))"},
        {"node_seed_derivation", "splitmix64(splitmix64(run_seed) ^ splitmix64(node + 0x4e4f4445))"}}},
      {"topology", {{"n_nodes", result.topology.size()}, {"edges", edge_list}}},
      {"steady_state_emse_db_tail20", steady},
      {"sils_stats",
       {{"max_coeff_sum_error", result.sils.max_sum_error},
        {"negative_coefficient_events", result.sils.negative_coefficient_events},
        {"updates", result.sils.updates}}},
      {"outputs", outputs},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(dir / "plot_curves.py", kPlotScript);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = run_simulation(config);
  write_outputs(config, result, config.output_dir);
  return result;
}

}  // namespace dlms
