#include "dlms/diffusion.hpp"
#include "dlms/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dlms_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("minimal run emits well-formed outputs") {
  auto config = dlms::parse_config(R"({"runs": 1, "iterations": 10, "n_nodes": 2})");
  config.topology.radius = std::sqrt(2.0);
  config.output_dir = scratch("smoke").string();
  config.trace = {true, true, 0};
  const auto result = dlms::run_experiment(config);
  REQUIRE(result.curves.size() == 3);

  const fs::path dir = config.output_dir;
  std::ifstream csv(dir / "learning_curve.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "iteration,algorithm,emse_db,msd_db");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 10 * 3);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(dlms::from_json(manifest["config"]) == config);
  CHECK(manifest["topology"]["edges"].size() == 1);
  CHECK(slurp(dir / "topology.txt") == "0 1\n");
  CHECK(fs::exists(dir / "plot_curves.py"));
  CHECK(slurp(dir / "esls_trace.csv").rfind("iteration,node,subset_mask\n", 0) == 0);
  CHECK(slurp(dir / "sils_trace.csv").rfind("iteration,node,neighbor,coefficient\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("identical seed and config give byte-identical CSV regardless of workers") {
  auto config = dlms::parse_config(R"({"runs": 6, "iterations": 150, "n_nodes": 10, "topology": {"radius": 0.45}})");
  config.output_dir = scratch("det_a").string();
  config.workers = 1;
  dlms::run_experiment(config);
  const auto a = slurp(fs::path(config.output_dir) / "learning_curve.csv");
  config.output_dir = scratch("det_b").string();
  config.workers = 4;
  dlms::run_experiment(config);
  const auto b = slurp(fs::path(config.output_dir) / "learning_curve.csv");
  CHECK(!a.empty());
  CHECK(a == b);

  config.seed += 1;
  config.output_dir = scratch("det_c").string();
  dlms::run_experiment(config);
  CHECK(slurp(fs::path(config.output_dir) / "learning_curve.csv") != a);
  for (const char* d : {"det_a", "det_b", "det_c"}) fs::remove_all(fs::temp_directory_path() / (std::string("dlms_test_") + d));
}

TEST_CASE("algorithms share sample paths: a curve does not depend on its companions") {
  auto config = dlms::parse_config(R"({"runs": 3, "iterations": 100, "n_nodes": 8, "topology": {"radius": 0.5}})");
  config.algorithms = {dlms::Algorithm::Atc};
  const auto alone = dlms::run_simulation(config);
  config.algorithms = {dlms::Algorithm::Sils, dlms::Algorithm::Esls, dlms::Algorithm::Atc};
  const auto together = dlms::run_simulation(config);
  CHECK(alone.curve(dlms::Algorithm::Atc).emse_db == together.curve(dlms::Algorithm::Atc).emse_db);
}

TEST_CASE("ATC over an edgeless topology equals independent LMS filters") {
  const auto edges = fs::temp_directory_path() / "dlms_test_empty_edges.txt";
  { std::ofstream out(edges); }
  auto config = dlms::parse_config(R"({"runs": 1, "iterations": 200, "n_nodes": 4, "algorithms": ["atc"]})");
  config.topology.edge_list = edges.string();
  const auto topology = dlms::build_topology(config);
  CHECK(topology.edges().empty());
  const auto out = dlms::simulate_run(config, topology, dlms::metropolis_weights(topology), 0);

  dlms::SignalSettings settings;
  settings.filter_length = config.filter_len;
  settings.noise_variance = config.noise_var;
  dlms::SignalSource signals(settings, 4, dlms::derive_run_seed(config.seed, 0));
  std::vector<dlms::CVector> lms(4, dlms::CVector::Zero(10));
  for (std::size_t i = 0; i < 200; ++i) {
    signals.step();
    for (std::size_t k = 0; k < 4; ++k) {
      const double e = dlms::apriori_error(signals.truth().omega0, lms[k], signals.regressors()[k]);
      REQUIRE(out.records[0].apriori_error_sq[i * 4 + k] == e);
      lms[k] = dlms::adapt(lms[k], signals.regressors()[k], signals.measurements()[k], config.step_size);
    }
  }
  fs::remove(edges);
}

TEST_CASE("ESLS neighborhood cap surfaces before any run") {
  auto config = dlms::parse_config(R"({"runs": 1, "iterations": 5, "n_nodes": 8, "algorithms": ["esls"]})");
  config.topology.radius = std::sqrt(2.0);
  config.esls.max_neighborhood = 4;
  CHECK_THROWS_AS(dlms::run_simulation(config), std::length_error);
}

TEST_CASE("missing edge list is a runtime error") {
  auto config = dlms::parse_config(R"({"runs": 1, "iterations": 5})");
  config.topology.edge_list = "/nonexistent/edges.txt";
  CHECK_THROWS_AS(dlms::run_simulation(config), std::runtime_error);
}

}
