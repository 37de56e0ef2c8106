#include "dlms/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

TEST_SUITE("rng") {

TEST_CASE("same seed replays the same stream") {
  dlms::Rng a(42);
  dlms::Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("uniform stays in [0, 1) and normal has unit moments") {
  dlms::Rng rng(3);
  double mean = 0.0;
  double second = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double z = rng.normal();
    mean += z;
    second += z * z;
  }
  CHECK(std::abs(mean / n) < 0.01);
  CHECK(second / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("complex_normal splits variance across real and imaginary parts") {
  dlms::Rng rng(9);
  double re2 = 0.0;
  double im2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.complex_normal(2.0);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
  }
  CHECK(re2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(1.0).epsilon(0.02));

  const auto r = rng.complex_normal(1.0, /*real_valued=*/true);
  CHECK(r.imag() == 0.0);
}

TEST_CASE("derived seeds are distinct across runs and nodes") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto rs = dlms::derive_run_seed(1, run);
    seeds.insert(rs);
    for (std::uint64_t node = 0; node < 20; ++node) seeds.insert(dlms::derive_node_seed(rs, node));
  }
  CHECK(seeds.size() == 100 * 21);
}

}
