#include "dlms/esls.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dlms {

std::vector<SubsetMask> enumerate_subset_masks(std::size_t nk, std::size_t max_neighborhood) {
  if (nk == 0) throw std::invalid_argument("neighbor set must not be empty");
  if (nk > max_neighborhood || nk >= 32) {
    throw std::length_error("neighborhood of size " + std::to_string(nk) +
                            " exceeds the exhaustive-search cap of " +
                            std::to_string(max_neighborhood));
  }
  std::vector<SubsetMask> masks;
  masks.reserve((std::size_t{1} << nk) - 1);
  std::vector<std::size_t> pick;
  for (std::size_t size = 1; size <= nk; ++size) {
    // Lexicographic walk over size-combinations of {0, ..., nk-1}.
    pick.resize(size);
    for (std::size_t j = 0; j < size; ++j) pick[j] = j;
    while (true) {
      SubsetMask mask = 0;
      for (std::size_t p : pick) mask |= SubsetMask{1} << p;
      masks.push_back(mask);
      std::size_t j = size;
      while (j > 0 && pick[j - 1] == nk - size + (j - 1)) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t t = j; t < size; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
  return masks;
}

std::vector<NodeIndex> subset_members(const std::vector<NodeIndex>& neighbors, SubsetMask mask) {
  std::vector<NodeIndex> members;
  for (std::size_t j = 0; j < neighbors.size(); ++j) {
    if (mask & (SubsetMask{1} << j)) members.push_back(neighbors[j]);
  }
  return members;
}

std::vector<std::vector<NodeIndex>> enumerate_subsets(const std::vector<NodeIndex>& neighbors,
                                                      std::size_t max_neighborhood) {
  std::vector<std::vector<NodeIndex>> out;
  for (SubsetMask mask : enumerate_subset_masks(neighbors.size(), max_neighborhood)) {
    out.push_back(subset_members(neighbors, mask));
  }
  return out;
}

std::vector<double> subset_weights(NodeIndex k, const std::vector<NodeIndex>& members,
                                   const CombinationMatrix& weights, bool renormalize) {
  if (members.empty()) throw std::invalid_argument("subset must not be empty");
  std::vector<double> w;
  w.reserve(members.size());
  double mass = 0.0;
  for (NodeIndex l : members) {
    w.push_back(weights(k, l));
    mass += w.back();
  }
  if (renormalize) {
    if (!(mass > 0.0)) {
      throw std::domain_error("subset of node " + std::to_string(k) + " carries no weight");
    }
    for (double& v : w) v /= mass;
  }
  return w;
}

Complex subset_error(NodeIndex k, const std::vector<NodeIndex>& members,
                     const CombinationMatrix& weights, const std::vector<CVector>& psis,
                     const CVector& x_k, Complex d_k, bool renormalize) {
  const auto w = subset_weights(k, members, weights, renormalize);
  return estimation_error(weighted_sum(psis, members, w), x_k, d_k);
}

std::size_t select_best(const std::vector<SubsetCandidate>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to select from");
  auto better = [](const SubsetCandidate& a, const SubsetCandidate& b) {
    const double ea = std::abs(a.error);
    const double eb = std::abs(b.error);
    if (ea != eb) return ea < eb;
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (better(candidates[i], candidates[best])) best = i;
  }
  return best;
}

EslsCombiner::EslsCombiner(const NetworkTopology& topology, const CombinationMatrix& weights,
                           EslsOptions options)
    : options_(options), selections_(topology.size()) {
  if (weights.size() != topology.size()) {
    throw std::invalid_argument("combination matrix size does not match topology");
  }
  nodes_.reserve(topology.size());
  for (NodeIndex k = 0; k < topology.size(); ++k) {
    NodeTable table;
    table.neighbors = topology.neighbor_set(k);
    const auto self_pos = static_cast<std::size_t>(
        std::find(table.neighbors.begin(), table.neighbors.end(), k) - table.neighbors.begin());
    for (SubsetMask mask : enumerate_subset_masks(table.neighbors.size(), options.max_neighborhood)) {
      if (options.require_self && !(mask & (SubsetMask{1} << self_pos))) continue;
      const auto members = subset_members(table.neighbors, mask);
      const auto w = subset_weights(k, members, weights, options.renormalize);
      std::vector<double> dense(table.neighbors.size(), 0.0);
      std::size_t m = 0;
      for (std::size_t j = 0; j < table.neighbors.size(); ++j) {
        if (mask & (SubsetMask{1} << j)) dense[j] = w[m++];
      }
      table.masks.push_back(mask);
      table.weights.push_back(std::move(dense));
    }
    nodes_.push_back(std::move(table));
  }
}

CVector EslsCombiner::combine_node(NodeIndex k, const std::vector<CVector>& psis,
                                   const CVector& x_k, Complex d_k) {
  const NodeTable& table = nodes_.at(k);
  const std::size_t nk = table.neighbors.size();
  // psi_l^H x_k per neighbor; every subset error is an affine mix of these.
  projections_.resize(nk);
  for (std::size_t j = 0; j < nk; ++j) projections_[j] = psis[table.neighbors[j]].dot(x_k);

  // Masks are already in (size, lexicographic) order, so a strict
  // comparison keeps the tie-break.
  std::size_t best = 0;
  double best_magnitude = std::numeric_limits<double>::infinity();
  Complex best_error{};
  for (std::size_t s = 0; s < table.masks.size(); ++s) {
    const auto& w = table.weights[s];
    Complex estimate{};
    for (SubsetMask bits = table.masks[s]; bits != 0; bits &= bits - 1) {
      const auto j = static_cast<std::size_t>(std::countr_zero(bits));
      estimate += w[j] * projections_[j];
    }
    const Complex error = d_k - estimate;
    const double magnitude = std::abs(error);
    if (magnitude < best_magnitude) {
      best_magnitude = magnitude;
      best_error = error;
      best = s;
    }
  }

  const SubsetMask mask = table.masks[best];
  selections_[k] = {mask, best_error};
  const auto members = subset_members(table.neighbors, mask);
  std::vector<double> w;
  w.reserve(members.size());
  for (std::size_t j = 0; j < nk; ++j) {
    if (mask & (SubsetMask{1} << j)) w.push_back(table.weights[best][j]);
  }
  return options_.renormalize ? combine(psis, members, w) : weighted_sum(psis, members, w);
}

}  // namespace dlms
