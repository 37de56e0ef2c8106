#include "dlms/topology.hpp"

#include "dlms/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace dlms {

NetworkTopology::NetworkTopology(std::size_t node_count) : neighbors_(node_count) {
  if (node_count == 0) throw std::invalid_argument("topology needs at least one node");
  for (NodeIndex k = 0; k < node_count; ++k) neighbors_[k].push_back(k);
}

NetworkTopology NetworkTopology::from_edges(std::size_t node_count,
                                            const std::vector<Edge>& edges) {
  NetworkTopology topology(node_count);
  for (const auto& [k, l] : edges) topology.link(k, l);
  return topology;
}

void NetworkTopology::check_index(NodeIndex k) const {
  if (k >= size()) {
    throw std::out_of_range("node index " + std::to_string(k) + " out of range for " +
                            std::to_string(size()) + " nodes");
  }
}

void NetworkTopology::link(NodeIndex k, NodeIndex l) {
  check_index(k);
  check_index(l);
  if (k == l) throw std::invalid_argument("self-link on node " + std::to_string(k));
  auto insert_sorted = [](std::vector<NodeIndex>& set, NodeIndex v) {
    const auto it = std::lower_bound(set.begin(), set.end(), v);
    if (it == set.end() || *it != v) set.insert(it, v);
  };
  insert_sorted(neighbors_[k], l);
  insert_sorted(neighbors_[l], k);
}

bool NetworkTopology::linked(NodeIndex k, NodeIndex l) const {
  check_index(k);
  check_index(l);
  if (k == l) return false;
  const auto& set = neighbors_[k];
  return std::binary_search(set.begin(), set.end(), l);
}

const std::vector<NodeIndex>& NetworkTopology::neighbor_set(NodeIndex k) const {
  check_index(k);
  return neighbors_[k];
}

std::vector<Edge> NetworkTopology::edges() const {
  std::vector<Edge> out;
  for (NodeIndex k = 0; k < size(); ++k) {
    for (NodeIndex l : neighbors_[k]) {
      if (l > k) out.emplace_back(k, l);
    }
  }
  return out;
}

bool NetworkTopology::connected() const {
  std::vector<bool> seen(size(), false);
  std::vector<NodeIndex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeIndex k = stack.back();
    stack.pop_back();
    for (NodeIndex l : neighbors_[k]) {
      if (!seen[l]) {
        seen[l] = true;
        ++reached;
        stack.push_back(l);
      }
    }
  }
  return reached == size();
}

void NetworkTopology::set_positions(std::vector<std::array<double, 2>> positions) {
  if (!positions.empty() && positions.size() != size()) {
    throw std::invalid_argument("position count does not match node count");
  }
  positions_ = std::move(positions);
}

std::vector<double> CombinationMatrix::row(NodeIndex k,
                                           const std::vector<NodeIndex>& neighbors) const {
  std::vector<double> out;
  out.reserve(neighbors.size());
  for (NodeIndex l : neighbors) out.push_back((*this)(k, l));
  return out;
}

double CombinationMatrix::max_row_sum_error() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < weights_.rows(); ++k) {
    double sum = 0.0;
    for (Eigen::Index l = 0; l < weights_.cols(); ++l) sum += weights_(k, l);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

NetworkTopology generate_random_geometric(std::size_t n, double radius, std::uint64_t seed,
                                          int max_attempts) {
  if (n == 0) throw std::invalid_argument("node count must be at least 1");
  if (!(radius > 0.0) || radius > std::sqrt(2.0)) {
    throw std::invalid_argument("radius must lie in (0, sqrt(2)]");
  }
  Rng rng(seed);
  const double r2 = radius * radius;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::array<double, 2>> pos(n);
    for (auto& p : pos) {
      p[0] = rng.uniform();
      p[1] = rng.uniform();
    }
    NetworkTopology topology(n);
    for (NodeIndex k = 0; k < n; ++k) {
      for (NodeIndex l = k + 1; l < n; ++l) {
        const double dx = pos[k][0] - pos[l][0];
        const double dy = pos[k][1] - pos[l][1];
        if (dx * dx + dy * dy <= r2) topology.link(k, l);
      }
    }
    if (topology.connected()) {
      topology.set_positions(std::move(pos));
      return topology;
    }
  }
  std::ostringstream msg;
  msg << "no connected geometric graph with n=" << n << " radius=" << radius << " after "
      << max_attempts << " attempts; increase the radius";
  throw TopologyError(msg.str());
}

CombinationMatrix metropolis_weights(const NetworkTopology& topology) {
  const auto n = static_cast<Eigen::Index>(topology.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (NodeIndex k = 0; k < topology.size(); ++k) {
    const auto nk = static_cast<double>(topology.neighborhood_size(k));
    double off_diagonal = 0.0;
    for (NodeIndex l : topology.neighbor_set(k)) {
      if (l == k) continue;
      const auto nl = static_cast<double>(topology.neighborhood_size(l));
      const double w = 1.0 / std::max(nk, nl);
      c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = w;
      off_diagonal += w;
    }
    c(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0 - off_diagonal;
  }
  return CombinationMatrix(std::move(c));
}

void write_edge_list(std::ostream& out, const NetworkTopology& topology) {
  for (const auto& [k, l] : topology.edges()) out << k << ' ' << l << '\n';
}

NetworkTopology read_edge_list(std::istream& in, std::size_t node_count) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long k = -1;
    long long l = -1;
    std::string extra;
    if (!(fields >> k >> l) || (fields >> extra) || k < 0 || l < 0) {
      throw TopologyError("edge list line " + std::to_string(line_no) +
                          ": expected two non-negative node indices");
    }
    edges.emplace_back(static_cast<NodeIndex>(k), static_cast<NodeIndex>(l));
  }
  try {
    return NetworkTopology::from_edges(node_count, edges);
  } catch (const std::logic_error& e) {
    throw TopologyError(std::string("edge list: ") + e.what());
  }
}

}  // namespace dlms
