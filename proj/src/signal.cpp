#include "dlms/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace dlms {

GroundTruth GroundTruth::random(std::size_t length, TruthMode mode, double markov_std, Rng& rng,
                                bool real_valued) {
  if (length == 0) throw std::invalid_argument("ground truth length must be positive");
  GroundTruth truth;
  truth.mode = mode;
  truth.markov_std = markov_std;
  truth.omega0.resize(static_cast<Eigen::Index>(length));
  for (Eigen::Index m = 0; m < truth.omega0.size(); ++m) {
    truth.omega0[m] = rng.complex_normal(1.0, real_valued);
  }
  const double norm = truth.omega0.norm();
  if (norm > 0.0) truth.omega0 /= norm;
  return truth;
}

GroundTruth evolve_truth(GroundTruth truth, Rng& rng, bool real_valued) {
  if (truth.mode != TruthMode::Markov) return truth;
  const double variance = truth.markov_std * truth.markov_std;
  for (Eigen::Index m = 0; m < truth.omega0.size(); ++m) {
    truth.omega0[m] += rng.complex_normal(variance, real_valued);
  }
  return truth;
}

NodeSignal::NodeSignal(std::size_t filter_length, double ar_coeff, double noise_std,
                       bool real_valued)
    : ar_coeff_(ar_coeff),
      noise_std_(noise_std),
      real_valued_(real_valued),
      window_(CVector::Zero(static_cast<Eigen::Index>(filter_length))) {
  if (filter_length == 0) throw std::invalid_argument("filter length must be positive");
  if (!(ar_coeff >= 0.0 && ar_coeff < 1.0)) {
    throw std::invalid_argument("AR coefficient must lie in [0, 1)");
  }
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise std must be non-negative");
}

Complex NodeSignal::input_step(Rng& rng) {
  const Complex drive = rng.complex_normal(1.0 - ar_coeff_ * ar_coeff_, real_valued_);
  const Complex u = drive + ar_coeff_ * last_input_;
  last_input_ = u;
  for (Eigen::Index m = window_.size() - 1; m > 0; --m) window_[m] = window_[m - 1];
  window_[0] = u;
  return u;
}

Complex measure(const GroundTruth& truth, const CVector& x, double noise_std, Rng& rng,
                bool real_valued) {
  if (x.size() != truth.omega0.size()) {
    throw std::invalid_argument("regressor length " + std::to_string(x.size()) +
                                " does not match parameter length " +
                                std::to_string(truth.omega0.size()));
  }
  // Eigen's dot conjugates its left operand: omega0.dot(x) = omega0^H x.
  // The noise draw happens even when noise_std is 0 so that noiseless and
  // noisy runs consume identical streams.
  const Complex clean = truth.omega0.dot(x);
  const Complex noise = rng.complex_normal(noise_std * noise_std, real_valued);
  return noise_std == 0.0 ? clean : clean + noise;
}

SignalSource::SignalSource(const SignalSettings& settings, std::size_t node_count,
                           std::uint64_t run_seed)
    : settings_(settings), run_rng_(run_seed) {
  if (settings.ar_coeff_min > settings.ar_coeff_max) {
    throw std::invalid_argument("AR coefficient range is inverted");
  }
  truth_ = GroundTruth::random(settings.filter_length, settings.mode, settings.markov_std,
                               run_rng_, settings.real_valued);
  const double noise_std = std::sqrt(settings.noise_variance);
  nodes_.reserve(node_count);
  node_rngs_.reserve(node_count);
  for (std::size_t k = 0; k < node_count; ++k) {
    const double ar = run_rng_.uniform(settings.ar_coeff_min, settings.ar_coeff_max);
    nodes_.emplace_back(settings.filter_length, ar, noise_std, settings.real_valued);
    node_rngs_.emplace_back(derive_node_seed(run_seed, k));
  }
  regressors_.assign(node_count, CVector::Zero(static_cast<Eigen::Index>(settings.filter_length)));
  measurements_.assign(node_count, Complex{});
}

void SignalSource::step() {
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    nodes_[k].input_step(node_rngs_[k]);
    regressors_[k] = nodes_[k].regressor();
    measurements_[k] = measure(truth_, regressors_[k], nodes_[k].noise_std(), node_rngs_[k],
                               settings_.real_valued);
  }
}

void SignalSource::advance_truth() {
  truth_ = evolve_truth(std::move(truth_), run_rng_, settings_.real_valued);
}

}  // namespace dlms
