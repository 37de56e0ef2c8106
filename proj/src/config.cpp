#include "dlms/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dlms {

using nlohmann::json;

std::string to_string(Scenario s) { return s == Scenario::Static ? "static" : "time_varying"; }

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Atc: return "atc";
    case Algorithm::Esls: return "esls";
    case Algorithm::Sils: return "sils";
  }
  return "?";
}

Scenario parse_scenario(const std::string& text) {
  if (text == "static") return Scenario::Static;
  if (text == "time_varying" || text == "time-varying" || text == "markov") {
    return Scenario::TimeVarying;
  }
  throw ConfigError("scenario: expected 'static' or 'time_varying', got '" + text + "'");
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "atc") return Algorithm::Atc;
  if (text == "esls") return Algorithm::Esls;
  if (text == "sils") return Algorithm::Sils;
  throw ConfigError("algorithms: unknown algorithm '" + text + "'");
}

double ExperimentConfig::resolved_rho() const {
  if (sils.rho) return *sils.rho;
  return scenario == Scenario::Static ? 4e-3 : 6e-3;
}

std::vector<double> ExperimentConfig::resolved_step_sizes() const {
  if (!step_sizes.empty()) return step_sizes;
  return std::vector<double>(n_nodes, step_size);
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + ": " + what);
  };
  require(c.n_nodes >= 1, "n_nodes", "must be at least 1");
  require(c.filter_len >= 1, "filter_len", "must be at least 1");
  require(c.step_size > 0.0 && std::isfinite(c.step_size), "step_size", "must be positive");
  require(c.step_sizes.empty() || c.step_sizes.size() == c.n_nodes, "step_sizes",
          "must list one step size per node");
  for (double mu : c.step_sizes) {
    require(mu > 0.0 && std::isfinite(mu), "step_sizes", "entries must be positive");
  }
  require(c.noise_var >= 0.0 && std::isfinite(c.noise_var), "noise_var", "must be non-negative");
  require(c.runs >= 1, "runs", "must be at least 1");
  require(c.iterations >= 1, "iterations", "must be at least 1");
  require(!c.algorithms.empty(), "algorithms", "must name at least one algorithm");
  std::set<Algorithm> seen(c.algorithms.begin(), c.algorithms.end());
  require(seen.size() == c.algorithms.size(), "algorithms", "must not repeat an algorithm");
  require(c.resolved_rho() >= 0.0 && std::isfinite(c.resolved_rho()), "sils.rho",
          "must be non-negative");
  require(c.sils.epsilon > 0.0 && std::isfinite(c.sils.epsilon), "sils.epsilon",
          "must be positive");
  require(c.esls.max_neighborhood >= 1 && c.esls.max_neighborhood <= 24, "esls.max_neighborhood",
          "must lie in [1, 24]");
  require(c.topology.radius > 0.0 && c.topology.radius <= std::sqrt(2.0), "topology.radius",
          "must lie in (0, sqrt(2)]");
  require(c.ar_coeff_min >= 0.0 && c.ar_coeff_max < 1.0 && c.ar_coeff_min <= c.ar_coeff_max,
          "ar_coeff_range", "must satisfy 0 <= lo <= hi < 1");
  require(c.markov_std >= 0.0 && std::isfinite(c.markov_std), "markov_std",
          "must be non-negative");
  require(c.trace.run < c.runs, "trace.run", "must name an existing run");
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
}

namespace {

std::string describe(const std::string& path) { return path.empty() ? "config" : path; }

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == std::floor(d)) return static_cast<std::size_t>(d);
  }
  throw ConfigError(path + ": expected a non-negative integer");
}

std::uint64_t get_seed(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  throw ConfigError(path + ": expected a non-negative integer");
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path + ": expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path + ": expected a string");
  return v.get<std::string>();
}

template <typename Handler>
void for_each_field(const json& obj, const std::string& path, Handler&& handle) {
  if (!obj.is_object()) throw ConfigError(describe(path) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!handle(key, value, field)) throw ConfigError(field + ": unknown key");
  }
}

std::vector<Algorithm> get_algorithms(const json& v, const std::string& path) {
  std::vector<std::string> names;
  if (v.is_string()) {
    std::istringstream in(v.get<std::string>());
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) names.push_back(item);
    }
  } else if (v.is_array()) {
    for (const auto& item : v) names.push_back(get_string(item, path));
  } else {
    throw ConfigError(path + ": expected a list of algorithm names");
  }
  std::vector<Algorithm> out;
  for (const auto& n : names) out.push_back(parse_algorithm(n));
  return out;
}

}  // namespace

ExperimentConfig from_json(const json& doc) {
  ExperimentConfig c;
  for_each_field(doc, "", [&](const std::string& key, const json& v, const std::string& f) {
    if (key == "scenario") c.scenario = parse_scenario(get_string(v, f));
    else if (key == "n_nodes") c.n_nodes = get_count(v, f);
    else if (key == "filter_len") c.filter_len = get_count(v, f);
    else if (key == "step_size") c.step_size = get_number(v, f);
    else if (key == "step_sizes") {
      if (!v.is_array()) throw ConfigError(f + ": expected a list of numbers");
      c.step_sizes.clear();
      for (const auto& mu : v) c.step_sizes.push_back(get_number(mu, f));
    } else if (key == "noise_var") c.noise_var = get_number(v, f);
    else if (key == "runs") c.runs = get_count(v, f);
    else if (key == "iterations") c.iterations = get_count(v, f);
    else if (key == "seed") c.seed = get_seed(v, f);
    else if (key == "algorithms") c.algorithms = get_algorithms(v, f);
    else if (key == "sils") {
      for_each_field(v, f, [&](const std::string& k, const json& x, const std::string& g) {
        if (k == "rho") c.sils.rho = get_number(x, g);
        else if (k == "epsilon") c.sils.epsilon = get_number(x, g);
        else if (k == "persist_coeffs") c.sils.persist_coeffs = get_bool(x, g);
        else if (k == "clamp") c.sils.clamp = get_bool(x, g);
        else return false;
        return true;
      });
    } else if (key == "esls") {
      for_each_field(v, f, [&](const std::string& k, const json& x, const std::string& g) {
        if (k == "renormalize") c.esls.renormalize = get_bool(x, g);
        else if (k == "require_self") c.esls.require_self = get_bool(x, g);
        else if (k == "max_neighborhood") c.esls.max_neighborhood = get_count(x, g);
        else return false;
        return true;
      });
    } else if (key == "topology") {
      for_each_field(v, f, [&](const std::string& k, const json& x, const std::string& g) {
        if (k == "radius") c.topology.radius = get_number(x, g);
        else if (k == "edge_list") c.topology.edge_list = get_string(x, g);
        else if (k == "seed") c.topology.seed = get_seed(x, g);
        else return false;
        return true;
      });
    } else if (key == "trace") {
      for_each_field(v, f, [&](const std::string& k, const json& x, const std::string& g) {
        if (k == "esls") c.trace.esls = get_bool(x, g);
        else if (k == "sils") c.trace.sils = get_bool(x, g);
        else if (k == "run") c.trace.run = get_count(x, g);
        else return false;
        return true;
      });
    } else if (key == "ar_coeff_range") {
      if (!v.is_array() || v.size() != 2) throw ConfigError(f + ": expected [lo, hi]");
      c.ar_coeff_min = get_number(v[0], f);
      c.ar_coeff_max = get_number(v[1], f);
    } else if (key == "markov_std") c.markov_std = get_number(v, f);
    else if (key == "real_valued") c.real_valued = get_bool(v, f);
    else if (key == "workers") c.workers = get_count(v, f);
    else if (key == "output_dir") c.output_dir = get_string(v, f);
    else return false;
    return true;
  });
  return c;
}

json to_json(const ExperimentConfig& c) {
  json algorithms = json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(to_string(a));
  json sils = {{"epsilon", c.sils.epsilon},
               {"persist_coeffs", c.sils.persist_coeffs},
               {"clamp", c.sils.clamp}};
  if (c.sils.rho) sils["rho"] = *c.sils.rho;
  json topology = {{"radius", c.topology.radius}, {"edge_list", c.topology.edge_list}};
  if (c.topology.seed) topology["seed"] = *c.topology.seed;
  json doc = {
      {"scenario", to_string(c.scenario)},
      {"n_nodes", c.n_nodes},
      {"filter_len", c.filter_len},
      {"step_size", c.step_size},
      {"noise_var", c.noise_var},
      {"runs", c.runs},
      {"iterations", c.iterations},
      {"seed", c.seed},
      {"algorithms", algorithms},
      {"sils", sils},
      {"esls",
       {{"renormalize", c.esls.renormalize},
        {"require_self", c.esls.require_self},
        {"max_neighborhood", c.esls.max_neighborhood}}},
      {"topology", topology},
      {"ar_coeff_range", {c.ar_coeff_min, c.ar_coeff_max}},
      {"markov_std", c.markov_std},
      {"real_valued", c.real_valued},
      {"workers", c.workers},
      {"trace", {{"esls", c.trace.esls}, {"sils", c.trace.sils}, {"run", c.trace.run}}},
      {"output_dir", c.output_dir},
  };
  if (!c.step_sizes.empty()) doc["step_sizes"] = c.step_sizes;
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
    if (!node->is_object()) throw ConfigError(key + ": cannot descend into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(doc, o);
  ExperimentConfig config = from_json(doc);
  validate(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

}  // namespace dlms
