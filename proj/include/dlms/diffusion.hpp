#pragma once

#include "dlms/signal.hpp"
#include "dlms/topology.hpp"

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace dlms {

inline constexpr double kWeightSumTolerance = 1e-12;

/// Per-node estimates. `coeff_row` is aligned with the node's neighbor set.
struct NodeState {
  CVector omega;  ///< omega_k(i)
  CVector psi;    ///< psi_k(i)
  double step_size = 0.0;
  std::vector<double> coeff_row;
};

/// d - omega^H x.
inline Complex estimation_error(const CVector& omega, const CVector& x, Complex d) {
  return d - omega.dot(x);
}

/// LMS adaptation: psi = omega + mu * x * conj(d - omega^H x).
CVector adapt(const CVector& omega_prev, const CVector& x, Complex d, double step_size);

/// Adapts `state.psi` from `state.omega`; omega is left untouched.
void adapt(NodeState& state, const CVector& x, Complex d);

/// sum_j weights[j] * psis[members[j]] with no constraint on the weights.
CVector weighted_sum(const std::vector<CVector>& psis, std::span<const NodeIndex> members,
                     std::span<const double> weights);

/// Combination step. Throws std::domain_error when the weights do not sum
/// to 1 within kWeightSumTolerance.
CVector combine(const std::vector<CVector>& psis, std::span<const NodeIndex> members,
                std::span<const double> weights);

/// Phase-2 rule of a diffusion strategy: builds omega_k from the frozen
/// phase-1 intermediate estimates.
class Combiner {
 public:
  virtual ~Combiner() = default;
  virtual std::string_view name() const = 0;
  virtual CVector combine_node(NodeIndex k, const std::vector<CVector>& psis, const CVector& x_k,
                               Complex d_k) = 0;
};

/// Fixed-weight adapt-then-combine rule.
class AtcCombiner final : public Combiner {
 public:
  AtcCombiner(const NetworkTopology& topology, const CombinationMatrix& weights);

  std::string_view name() const override { return "atc"; }
  CVector combine_node(NodeIndex k, const std::vector<CVector>& psis, const CVector& x_k,
                       Complex d_k) override;

 private:
  std::vector<std::vector<NodeIndex>> neighbors_;
  std::vector<std::vector<double>> rows_;
};

/// Synchronous diffusion network: every node adapts, then every node
/// combines against the same snapshot of intermediate estimates.
class DiffusionNetwork {
 public:
  DiffusionNetwork(const NetworkTopology& topology, std::unique_ptr<Combiner> combiner,
                   std::vector<double> step_sizes, std::size_t filter_length);

  /// One time step. Returns the per-node output errors d_k - omega_k(i-1)^H x_k.
  std::vector<Complex> iterate(const std::vector<CVector>& regressors,
                               const std::vector<Complex>& measurements);

  std::size_t size() const noexcept { return omega_.size(); }
  const std::vector<CVector>& estimates() const noexcept { return omega_; }
  /// Intermediate estimates from the most recent adaptation phase.
  const std::vector<CVector>& intermediates() const noexcept { return psi_; }
  Combiner& combiner() noexcept { return *combiner_; }
  const Combiner& combiner() const noexcept { return *combiner_; }

 private:
  std::unique_ptr<Combiner> combiner_;
  std::vector<double> step_sizes_;
  std::vector<CVector> omega_;
  std::vector<CVector> psi_;
  std::vector<CVector> next_omega_;
};

}  // namespace dlms
