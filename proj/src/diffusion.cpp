#include "dlms/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dlms {

CVector adapt(const CVector& omega_prev, const CVector& x, Complex d, double step_size) {
  if (omega_prev.size() != x.size()) {
    throw std::invalid_argument("adapt: estimate length " + std::to_string(omega_prev.size()) +
                                " vs regressor length " + std::to_string(x.size()));
  }
  const Complex error = estimation_error(omega_prev, x, d);
  return omega_prev + (step_size * std::conj(error)) * x;
}

void adapt(NodeState& state, const CVector& x, Complex d) {
  state.psi = adapt(state.omega, x, d, state.step_size);
}

CVector weighted_sum(const std::vector<CVector>& psis, std::span<const NodeIndex> members,
                     std::span<const double> weights) {
  if (members.size() != weights.size() || members.empty()) {
    throw std::invalid_argument("combine: weights not aligned with members");
  }
  CVector out = CVector::Zero(psis.at(members[0]).size());
  for (std::size_t j = 0; j < members.size(); ++j) out += weights[j] * psis.at(members[j]);
  return out;
}

CVector combine(const std::vector<CVector>& psis, std::span<const NodeIndex> members,
                std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(std::abs(sum - 1.0) <= kWeightSumTolerance)) {
    throw std::domain_error("combine: weights sum to " + std::to_string(sum) + ", expected 1");
  }
  return weighted_sum(psis, members, weights);
}

AtcCombiner::AtcCombiner(const NetworkTopology& topology, const CombinationMatrix& weights) {
  if (weights.size() != topology.size()) {
    throw std::invalid_argument("combination matrix size does not match topology");
  }
  for (NodeIndex k = 0; k < topology.size(); ++k) {
    neighbors_.push_back(topology.neighbor_set(k));
    rows_.push_back(weights.row(k, neighbors_.back()));
  }
}

CVector AtcCombiner::combine_node(NodeIndex k, const std::vector<CVector>& psis, const CVector&,
                                  Complex) {
  return combine(psis, neighbors_[k], rows_[k]);
}

DiffusionNetwork::DiffusionNetwork(const NetworkTopology& topology,
                                   std::unique_ptr<Combiner> combiner,
                                   std::vector<double> step_sizes, std::size_t filter_length)
    : combiner_(std::move(combiner)), step_sizes_(std::move(step_sizes)) {
  if (!combiner_) throw std::invalid_argument("diffusion network needs a combiner");
  if (step_sizes_.size() != topology.size()) {
    throw std::invalid_argument("one step size per node required");
  }
  for (double mu : step_sizes_) {
    if (!(mu > 0.0)) throw std::invalid_argument("step sizes must be positive");
  }
  const CVector zero = CVector::Zero(static_cast<Eigen::Index>(filter_length));
  omega_.assign(topology.size(), zero);
  psi_.assign(topology.size(), zero);
  next_omega_.assign(topology.size(), zero);
}

std::vector<Complex> DiffusionNetwork::iterate(const std::vector<CVector>& regressors,
                                               const std::vector<Complex>& measurements) {
  const std::size_t n = omega_.size();
  if (regressors.size() != n || measurements.size() != n) {
    throw std::invalid_argument("one regressor and measurement per node required");
  }
  std::vector<Complex> errors(n);
  for (std::size_t k = 0; k < n; ++k) {
    errors[k] = estimation_error(omega_[k], regressors[k], measurements[k]);
    psi_[k] = adapt(omega_[k], regressors[k], measurements[k], step_sizes_[k]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    next_omega_[k] = combiner_->combine_node(k, psi_, regressors[k], measurements[k]);
  }
  omega_.swap(next_omega_);
  return errors;
}

}  // namespace dlms
