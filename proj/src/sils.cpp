#include "dlms/sils.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dlms {

std::vector<Complex> neighbor_errors(const std::vector<NodeIndex>& neighbors,
                                     const std::vector<CVector>& psis, const CVector& x_k,
                                     Complex d_k) {
  std::vector<Complex> raw;
  raw.reserve(neighbors.size());
  for (NodeIndex l : neighbors) {
    const CVector& psi = psis.at(l);
    if (psi.size() != x_k.size()) throw std::invalid_argument("neighbor_errors: length mismatch");
    raw.push_back(estimation_error(psi, x_k, d_k));
  }
  return raw;
}

ErrorVector sparsify_errors(std::vector<Complex> raw) {
  if (raw.empty()) throw std::invalid_argument("sparsify_errors: empty error vector");
  ErrorVector out;
  out.raw = std::move(raw);
  out.sparsified.assign(out.raw.size(), 0.0);
  double max_mag = std::abs(out.raw[0]);
  double min_mag = max_mag;
  for (std::size_t j = 1; j < out.raw.size(); ++j) {
    const double m = std::abs(out.raw[j]);
    if (m > max_mag) {
      max_mag = m;
      out.argmax = j;
    }
    if (m < min_mag) {
      min_mag = m;
      out.argmin = j;
    }
  }
  out.xi_min = out.raw[out.argmin];
  if (out.argmax != out.argmin) {
    out.sparsified[out.argmax] = max_mag;
    out.sparsified[out.argmin] = -min_mag;
  }
  return out;
}

double sign(double x) {
  if (x == 0.0) return 0.0;
  return x > 0.0 ? 1.0 : -1.0;
}

Complex sign(Complex x) {
  const double magnitude = std::abs(x);
  if (magnitude == 0.0) return {0.0, 0.0};
  return x / magnitude;
}

std::vector<double> sils_adjust(std::span<const double> coeffs, const ErrorVector& errors,
                                const SilsParams& params) {
  if (coeffs.size() != errors.sparsified.size()) {
    throw std::invalid_argument("sils_adjust: coefficients not aligned with errors");
  }
  const double scale = params.rho * params.epsilon / (1.0 + params.epsilon * std::abs(errors.xi_min));
  std::vector<double> out(coeffs.begin(), coeffs.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= scale * sign(errors.sparsified[j]);
  // an exactly-zero minimum error still marks the best neighbor
  if (errors.argmax != errors.argmin && errors.sparsified[errors.argmin] == 0.0) {
    out[errors.argmin] += scale;
  }
  return out;
}

SilsCombiner::SilsCombiner(const NetworkTopology& topology, const CombinationMatrix& weights,
                           SilsParams params, SilsOptions options)
    : params_(params), options_(options) {
  if (!(params.rho >= 0.0) || !(params.epsilon > 0.0)) {
    throw std::invalid_argument("SILS needs rho >= 0 and epsilon > 0");
  }
  if (weights.size() != topology.size()) {
    throw std::invalid_argument("combination matrix size does not match topology");
  }
  for (NodeIndex k = 0; k < topology.size(); ++k) {
    neighbors_.push_back(topology.neighbor_set(k));
    base_.push_back(weights.row(k, neighbors_.back()));
  }
  live_ = base_;
  used_ = base_;
}

CVector SilsCombiner::combine_node(NodeIndex k, const std::vector<CVector>& psis,
                                   const CVector& x_k, Complex d_k) {
  const auto& neighbors = neighbors_.at(k);
  const ErrorVector errors = sparsify_errors(neighbor_errors(neighbors, psis, x_k, d_k));
  const auto& start = options_.persist_coeffs ? live_[k] : base_[k];
  std::vector<double> adjusted = sils_adjust(start, errors, params_);

  if (std::any_of(adjusted.begin(), adjusted.end(), [](double c) { return c < 0.0; })) {
    ++negative_events_;
    if (options_.clamp) {
      for (std::size_t j = 0; j < adjusted.size(); ++j) {
        if (adjusted[j] < 0.0 && j != errors.argmin) {
          adjusted[errors.argmin] += adjusted[j];
          adjusted[j] = 0.0;
        }
      }
    }
  }
  ++updates_;

  double sum = 0.0;
  for (double c : adjusted) sum += c;
  max_sum_error_ = std::max(max_sum_error_, std::abs(sum - 1.0));

  CVector omega = combine(psis, neighbors, adjusted);
  if (options_.persist_coeffs) live_[k] = adjusted;
  used_[k] = std::move(adjusted);
  return omega;
}

}  // namespace dlms
