#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dlms {

using NodeIndex = std::size_t;
using Edge = std::pair<NodeIndex, NodeIndex>;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected network graph. Every node is implicitly its own neighbor;
/// self-links are never stored.
class NetworkTopology {
 public:
  explicit NetworkTopology(std::size_t node_count);

  /// Builds a topology from an edge list. Duplicate edges are ignored,
  /// self-loops and out-of-range indices are rejected.
  static NetworkTopology from_edges(std::size_t node_count, const std::vector<Edge>& edges);

  void link(NodeIndex k, NodeIndex l);

  std::size_t size() const noexcept { return neighbors_.size(); }
  bool linked(NodeIndex k, NodeIndex l) const;

  /// N_k = {k} and every node linked to k, ascending.
  const std::vector<NodeIndex>& neighbor_set(NodeIndex k) const;

  /// |N_k|, counting k itself.
  std::size_t neighborhood_size(NodeIndex k) const { return neighbor_set(k).size(); }

  /// Undirected edges as (k, l) with k < l, ascending.
  std::vector<Edge> edges() const;

  bool connected() const;

  /// Unit-square coordinates when the graph was generated geometrically.
  const std::vector<std::array<double, 2>>& positions() const noexcept { return positions_; }
  void set_positions(std::vector<std::array<double, 2>> positions);

  friend bool operator==(const NetworkTopology& a, const NetworkTopology& b) {
    return a.neighbors_ == b.neighbors_;
  }

 private:
  void check_index(NodeIndex k) const;

  std::vector<std::vector<NodeIndex>> neighbors_;
  std::vector<std::array<double, 2>> positions_;
};

/// Row-stochastic N x N combination weights c_kl.
class CombinationMatrix {
 public:
  explicit CombinationMatrix(Eigen::MatrixXd weights) : weights_(std::move(weights)) {}

  static CombinationMatrix identity(std::size_t n) {
    return CombinationMatrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                       static_cast<Eigen::Index>(n)));
  }

  double operator()(NodeIndex k, NodeIndex l) const {
    return weights_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
  }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }

  /// Weights of row k restricted to the given neighbor set, in that order.
  std::vector<double> row(NodeIndex k, const std::vector<NodeIndex>& neighbors) const;

  /// max_k |sum_l c_kl - 1|.
  double max_row_sum_error() const;

 private:
  Eigen::MatrixXd weights_;
};

/// Random geometric graph in the unit square: nodes within `radius` are
/// linked. Placement is redrawn until the graph is connected.
NetworkTopology generate_random_geometric(std::size_t n, double radius, std::uint64_t seed,
                                          int max_attempts = 1000);

/// Metropolis rule: c_kl = 1/max(n_k, n_l) on links, 0 off links, and the
/// diagonal absorbs the remainder. n_k counts node k itself.
CombinationMatrix metropolis_weights(const NetworkTopology& topology);

/// One "k l" line per edge, 0-based, ascending.
void write_edge_list(std::ostream& out, const NetworkTopology& topology);

/// Reads the edge-list format. Blank lines and '#' comments are skipped.
NetworkTopology read_edge_list(std::istream& in, std::size_t node_count);

}  // namespace dlms
