#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace dlms {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for Monte Carlo run `run_index` under `master_seed`.
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept;

/// Seed for the per-node stream `node` inside a run.
std::uint64_t derive_node_seed(std::uint64_t run_seed, std::uint64_t node) noexcept;

/// Seeded generator with a platform-independent draw sequence.
///
/// The standard distributions are implementation-defined, so uniform and
/// Gaussian variates are built directly from the mt19937_64 bit stream
/// (53-bit uniforms, polar-free Box-Muller with a cached second variate).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();
  /// Circular complex Gaussian with E|z|^2 = variance. In real mode the
  /// imaginary part is zero and the real part carries the full variance.
  std::complex<double> complex_normal(double variance, bool real_valued = false);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace dlms
