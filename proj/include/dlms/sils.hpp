#pragma once

#include "dlms/diffusion.hpp"

#include <cstdint>
#include <vector>

namespace dlms {

/// Strength and shrinkage magnitude of the reweighted zero-attracting
/// coefficient adjustment. rho = 0 disables the adjustment.
struct SilsParams {
  double rho = 4e-3;
  double epsilon = 10.0;
};

struct SilsOptions {
  bool persist_coeffs = false;  ///< carry adjusted coefficients to the next step
  bool clamp = false;           ///< floor coefficients at zero, excess to the best neighbor
};

/// Neighbor errors of one node together with their two-entry sparsified form.
struct ErrorVector {
  std::vector<Complex> raw;
  std::vector<double> sparsified;  ///< +|e|max at argmax, -|e|min at argmin, 0 elsewhere
  Complex xi_min{};                ///< raw error of smallest magnitude
  std::size_t argmax = 0;
  std::size_t argmin = 0;
};

/// raw[j] = d_k - psi_{N_k[j]}^H x_k.
std::vector<Complex> neighbor_errors(const std::vector<NodeIndex>& neighbors,
                                     const std::vector<CVector>& psis, const CVector& x_k,
                                     Complex d_k);

/// Keeps only the largest (as +|e|) and smallest (as -|e|) magnitude entries;
/// ties resolve to the lowest index. Throws on empty input.
ErrorVector sparsify_errors(std::vector<Complex> raw);

/// x/|x| for x != 0, else 0.
double sign(double x);
Complex sign(Complex x);

/// c'_j = c_j - rho * eps * sign(e_j) / (1 + eps * |xi_min|).
std::vector<double> sils_adjust(std::span<const double> coeffs, const ErrorVector& errors,
                                const SilsParams& params);

/// Sparsity-inspired link selection: per step, shifts delta of combination
/// weight from the worst-matching neighbor to the best-matching one.
class SilsCombiner final : public Combiner {
 public:
  SilsCombiner(const NetworkTopology& topology, const CombinationMatrix& weights,
               SilsParams params, SilsOptions options = {});

  std::string_view name() const override { return "sils"; }
  CVector combine_node(NodeIndex k, const std::vector<CVector>& psis, const CVector& x_k,
                       Complex d_k) override;

  const std::vector<NodeIndex>& neighbors(NodeIndex k) const { return neighbors_.at(k); }
  /// Coefficients used in node k's most recent combination.
  const std::vector<double>& coefficients(NodeIndex k) const { return used_.at(k); }

  /// Largest |sum_j c'_j - 1| seen so far.
  double max_sum_error() const noexcept { return max_sum_error_; }
  /// Number of node updates that produced at least one negative coefficient.
  std::uint64_t negative_coefficient_events() const noexcept { return negative_events_; }
  std::uint64_t updates() const noexcept { return updates_; }

 private:
  SilsParams params_;
  SilsOptions options_;
  std::vector<std::vector<NodeIndex>> neighbors_;
  std::vector<std::vector<double>> base_;
  std::vector<std::vector<double>> live_;
  std::vector<std::vector<double>> used_;
  double max_sum_error_ = 0.0;
  std::uint64_t negative_events_ = 0;
  std::uint64_t updates_ = 0;
};

}  // namespace dlms
