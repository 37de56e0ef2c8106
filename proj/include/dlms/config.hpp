#pragma once

#include "dlms/esls.hpp"
#include "dlms/sils.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlms {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { Static, TimeVarying };
enum class Algorithm { Atc, Esls, Sils };

std::string to_string(Scenario s);
std::string to_string(Algorithm a);
Scenario parse_scenario(const std::string& text);
Algorithm parse_algorithm(const std::string& text);

struct SilsConfig {
  std::optional<double> rho;  ///< unset: 4e-3 static, 6e-3 time-varying
  double epsilon = 10.0;
  bool persist_coeffs = false;
  bool clamp = false;

  friend bool operator==(const SilsConfig&, const SilsConfig&) = default;
};

struct EslsConfig {
  bool renormalize = true;
  bool require_self = false;
  std::size_t max_neighborhood = 12;

  friend bool operator==(const EslsConfig&, const EslsConfig&) = default;
};

struct TopologyConfig {
  double radius = 0.35;
  std::string edge_list;  ///< when non-empty, load instead of generating
  std::optional<std::uint64_t> seed;  ///< unset: derived from the master seed

  friend bool operator==(const TopologyConfig&, const TopologyConfig&) = default;
};

struct TraceConfig {
  bool esls = false;
  bool sils = false;
  std::size_t run = 0;

  friend bool operator==(const TraceConfig&, const TraceConfig&) = default;
};

/// Full experiment description. See README for the file schema.
struct ExperimentConfig {
  Scenario scenario = Scenario::Static;
  std::size_t n_nodes = 20;
  std::size_t filter_len = 10;
  double step_size = 0.045;
  std::vector<double> step_sizes;  ///< optional per-node override
  double noise_var = 1e-3;
  std::size_t runs = 100;
  std::size_t iterations = 1000;
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::Atc, Algorithm::Esls, Algorithm::Sils};
  SilsConfig sils;
  EslsConfig esls;
  TopologyConfig topology;
  double ar_coeff_min = 0.0;
  double ar_coeff_max = 0.5;
  double markov_std = 1e-3;
  bool real_valued = false;
  std::size_t workers = 0;  ///< 0: hardware concurrency
  TraceConfig trace;
  std::string output_dir = "results";

  double resolved_rho() const;
  std::vector<double> resolved_step_sizes() const;
  SilsParams sils_params() const { return {resolved_rho(), sils.epsilon}; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& config);

/// Applies "dotted.key=value" overrides. Values are parsed as JSON and fall
/// back to plain strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Parses config text (JSON object; empty text means all defaults), applies
/// the overrides and validates. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides = {});

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig from_json(const nlohmann::json& doc);

}  // namespace dlms
