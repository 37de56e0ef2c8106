#pragma once

#include "dlms/diffusion.hpp"

#include <cstdint>
#include <vector>

namespace dlms {

/// Bit j set <=> the j-th entry of the (ascending) neighbor set is a member.
using SubsetMask = std::uint32_t;

struct EslsOptions {
  bool renormalize = true;     ///< rescale restricted weights to sum to 1
  bool require_self = false;   ///< only consider subsets containing node k
  std::size_t max_neighborhood = 12;
};

struct SubsetCandidate {
  SubsetMask mask = 0;
  std::vector<NodeIndex> members;
  std::vector<double> weights;
  Complex error{};
};

/// All non-empty subsets of an nk-element neighbor set, ordered by size and
/// then lexicographically by member position. Throws std::length_error when
/// nk exceeds `max_neighborhood`.
std::vector<SubsetMask> enumerate_subset_masks(std::size_t nk, std::size_t max_neighborhood = 12);

/// Same enumeration expressed as node-index member sets.
std::vector<std::vector<NodeIndex>> enumerate_subsets(const std::vector<NodeIndex>& neighbors,
                                                      std::size_t max_neighborhood = 12);

std::vector<NodeIndex> subset_members(const std::vector<NodeIndex>& neighbors, SubsetMask mask);

/// Metropolis weights of row k restricted to `members`, optionally
/// renormalized. Throws std::domain_error on zero mass when renormalizing.
std::vector<double> subset_weights(NodeIndex k, const std::vector<NodeIndex>& members,
                                   const CombinationMatrix& weights, bool renormalize = true);

/// e = d_k - (sum_l c_kl psi_l)^H x_k over the subset.
Complex subset_error(NodeIndex k, const std::vector<NodeIndex>& members,
                     const CombinationMatrix& weights, const std::vector<CVector>& psis,
                     const CVector& x_k, Complex d_k, bool renormalize = true);

/// Index of the candidate with the smallest |error|. Ties go to the smaller
/// subset, then to the lexicographically smaller member list.
std::size_t select_best(const std::vector<SubsetCandidate>& candidates);

/// Exhaustive-search link selection: each node combines over the neighbor
/// subset whose combined estimate best explains its current measurement.
class EslsCombiner final : public Combiner {
 public:
  struct Selection {
    SubsetMask mask = 0;
    Complex error{};
  };

  EslsCombiner(const NetworkTopology& topology, const CombinationMatrix& weights,
               EslsOptions options = {});

  std::string_view name() const override { return "esls"; }
  CVector combine_node(NodeIndex k, const std::vector<CVector>& psis, const CVector& x_k,
                       Complex d_k) override;

  /// Subset chosen for node k in the most recent combination.
  const Selection& last_selection(NodeIndex k) const { return selections_.at(k); }
  const std::vector<NodeIndex>& neighbors(NodeIndex k) const { return nodes_.at(k).neighbors; }
  const EslsOptions& options() const noexcept { return options_; }

 private:
  struct NodeTable {
    std::vector<NodeIndex> neighbors;
    std::vector<SubsetMask> masks;
    std::vector<std::vector<double>> weights;  // dense over neighbor positions
  };

  EslsOptions options_;
  std::vector<NodeTable> nodes_;
  std::vector<Selection> selections_;
  std::vector<Complex> projections_;
};

}  // namespace dlms
