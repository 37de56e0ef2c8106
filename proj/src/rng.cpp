#include "dlms/rng.hpp"

#include <cmath>
#include <numbers>

namespace dlms {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(run_index + 0x52554eULL));
}

std::uint64_t derive_node_seed(std::uint64_t run_seed, std::uint64_t node) noexcept {
  return splitmix64(splitmix64(run_seed) ^ splitmix64(node + 0x4e4f4445ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  // 1 - uniform() lies in (0, 1], keeping the log finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::complex<double> Rng::complex_normal(double variance, bool real_valued) {
  if (real_valued) return {std::sqrt(variance) * normal(), 0.0};
  const double s = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

}  // namespace dlms
