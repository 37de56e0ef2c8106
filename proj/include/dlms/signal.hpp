#pragma once

#include "dlms/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dlms {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

enum class TruthMode { Static, Markov };

/// The unknown parameter vector omega_0, optionally drifting as a random walk.
struct GroundTruth {
  CVector omega0;
  TruthMode mode = TruthMode::Static;
  double markov_std = 0.0;  ///< per-component innovation std (Markov mode)

  /// Circular complex Gaussian draw normalized to unit norm.
  static GroundTruth random(std::size_t length, TruthMode mode, double markov_std, Rng& rng,
                            bool real_valued = false);
};

/// omega_0 <- omega_0 + z with z ~ CN(0, markov_std^2 I). Static truth is
/// returned unchanged and consumes no draws.
GroundTruth evolve_truth(GroundTruth truth, Rng& rng, bool real_valued = false);

/// AR(1) input process feeding a tapped delay line:
///   u(i) = a(i) + ar_coeff * u(i-1),  a ~ CN(0, 1 - ar_coeff^2)
/// so the stationary input variance is 1.
class NodeSignal {
 public:
  NodeSignal(std::size_t filter_length, double ar_coeff, double noise_std,
             bool real_valued = false);

  /// Draws the next input sample, pushes it into the window and returns it.
  Complex input_step(Rng& rng);

  /// [u(i), u(i-1), ..., u(i-M+1)], zero-padded during warm-up.
  const CVector& regressor() const noexcept { return window_; }

  double ar_coeff() const noexcept { return ar_coeff_; }
  double noise_std() const noexcept { return noise_std_; }
  Complex last_input() const noexcept { return last_input_; }
  bool real_valued() const noexcept { return real_valued_; }

 private:
  double ar_coeff_;
  double noise_std_;
  bool real_valued_;
  Complex last_input_{0.0, 0.0};
  CVector window_;
};

/// d = omega_0^H x + v with v ~ CN(0, noise_std^2).
Complex measure(const GroundTruth& truth, const CVector& x, double noise_std, Rng& rng,
                bool real_valued = false);

struct SignalSettings {
  std::size_t filter_length = 10;
  double noise_variance = 1e-3;
  double ar_coeff_min = 0.0;
  double ar_coeff_max = 0.5;
  TruthMode mode = TruthMode::Static;
  double markov_std = 1e-3;
  bool real_valued = false;
};

/// All stochastic inputs of one Monte Carlo run.
///
/// Draw layout: the run stream (seeded by run_seed) first yields omega_0,
/// then one AR coefficient per node, then the Markov innovations. Node k
/// owns a stream seeded by derive_node_seed(run_seed, k) that yields, per
/// iteration, the input driving noise followed by the measurement noise.
class SignalSource {
 public:
  SignalSource(const SignalSettings& settings, std::size_t node_count, std::uint64_t run_seed);

  /// Advances every node's input and takes its measurement against the
  /// current truth.
  void step();
  /// Applies one Markov innovation to the truth (no-op when static).
  void advance_truth();

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const GroundTruth& truth() const noexcept { return truth_; }
  const std::vector<CVector>& regressors() const noexcept { return regressors_; }
  const std::vector<Complex>& measurements() const noexcept { return measurements_; }
  const NodeSignal& node(std::size_t k) const { return nodes_.at(k); }

 private:
  SignalSettings settings_;
  Rng run_rng_;
  GroundTruth truth_;
  std::vector<NodeSignal> nodes_;
  std::vector<Rng> node_rngs_;
  std::vector<CVector> regressors_;
  std::vector<Complex> measurements_;
};

}  // namespace dlms
