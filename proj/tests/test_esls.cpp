#include "dlms/esls.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using dlms::Complex;
using dlms::CVector;

namespace {

CVector scalar(double v) { return CVector::Constant(1, Complex(v, 0.0)); }

dlms::CombinationMatrix three_node_weights() {
  Eigen::MatrixXd w(3, 3);
  w << 0.6, 0.2, 0.2,
       0.2, 0.5, 0.3,
       0.2, 0.3, 0.5;
  return dlms::CombinationMatrix(w);
}

std::vector<CVector> random_psis(std::size_t n, Eigen::Index m, dlms::Rng& rng) {
  std::vector<CVector> psis(n, CVector(m));
  for (auto& p : psis)
    for (Eigen::Index i = 0; i < m; ++i) p[i] = rng.complex_normal(1.0);
  return psis;
}

}  // namespace

TEST_SUITE("esls") {

TEST_CASE("subset enumeration counts and order") {
  CHECK(dlms::enumerate_subset_masks(1) == std::vector<dlms::SubsetMask>{1});
  CHECK(dlms::enumerate_subset_masks(3) == std::vector<dlms::SubsetMask>{1, 2, 4, 3, 5, 6, 7});

  // Brute-force bitmask oracle: every value in [1, 2^5) exactly once.
  const auto five = dlms::enumerate_subset_masks(5);
  CHECK(five.size() == 31);
  const std::set<dlms::SubsetMask> unique(five.begin(), five.end());
  CHECK(unique.size() == 31);
  CHECK(*unique.begin() == 1);
  CHECK(*unique.rbegin() == 31);
  for (std::size_t i = 1; i < five.size(); ++i) {
    CHECK(std::popcount(five[i - 1]) <= std::popcount(five[i]));
  }

  const auto sets = dlms::enumerate_subsets({2, 5, 9});
  CHECK(sets.front() == std::vector<std::size_t>{2});
  CHECK(sets[3] == std::vector<std::size_t>{2, 5});
  CHECK(sets.back() == std::vector<std::size_t>{2, 5, 9});

  CHECK_THROWS_AS(dlms::enumerate_subset_masks(13), std::length_error);
  CHECK_THROWS_AS(dlms::enumerate_subset_masks(5, 4), std::length_error);
  CHECK(dlms::enumerate_subset_masks(12).size() == 4095);
}

TEST_CASE("subset weights and errors by hand, M=1") {
  const auto c = three_node_weights();
  const std::vector<CVector> psis{scalar(0.5), scalar(2.0), scalar(-1.0)};
  const CVector x = scalar(2.0);

  const auto w = dlms::subset_weights(0, {0, 1}, c);
  CHECK(w[0] == doctest::Approx(0.75));
  CHECK(w[1] == doctest::Approx(0.25));
  // 1.5 - 2 * (0.75*0.5 + 0.25*2) = -0.25
  CHECK(std::abs(dlms::subset_error(0, {0, 1}, c, psis, x, 1.5) - Complex(-0.25)) < 1e-15);
  // Raw weights: 1.5 - 2 * (0.6*0.5 + 0.2*2) = 0.1
  CHECK(std::abs(dlms::subset_error(0, {0, 1}, c, psis, x, 1.5, false) - Complex(0.1)) < 1e-15);

  // Full neighborhood: renormalization is the identity and the error is
  // the plain ATC error.
  const Complex atc = 1.5 - (0.6 * 0.5 + 0.2 * 2.0 + 0.2 * -1.0) * 2.0;
  CHECK(std::abs(dlms::subset_error(0, {0, 1, 2}, c, psis, x, 1.5) - atc) < 1e-15);

  // A perfect estimate yields zero error.
  CHECK(dlms::subset_error(0, {1}, c, psis, x, 4.0) == Complex(0.0));

  Eigen::MatrixXd zero = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(dlms::subset_weights(0, {1, 2}, dlms::CombinationMatrix(zero)),
                  std::domain_error);
}

TEST_CASE("select_best picks the smallest magnitude with the documented tie-break") {
  using Cand = dlms::SubsetCandidate;
  CHECK(dlms::select_best({Cand{1, {0}, {1.0}, Complex(3.0)}}) == 0);
  CHECK(dlms::select_best({Cand{1, {0}, {1.0}, Complex(0.2)}, Cand{3, {0, 1}, {}, Complex(0.0)},
                           Cand{2, {1}, {1.0}, Complex(0.0, 0.1)}}) == 1);
  // Equal magnitude: smaller subset wins, then lexicographic members.
  CHECK(dlms::select_best({Cand{3, {0, 1}, {}, Complex(0.5)}, Cand{4, {2}, {}, Complex(0.0, 0.5)}}) == 1);
  CHECK(dlms::select_best({Cand{4, {2}, {}, Complex(-0.5)}, Cand{2, {1}, {}, Complex(0.5)}}) == 1);
  CHECK_THROWS(dlms::select_best({}));
}

TEST_CASE("combiner choice is optimal over exhaustive enumeration") {
  const auto topology = dlms::generate_random_geometric(10, 0.5, 21);
  const auto c = dlms::metropolis_weights(topology);
  dlms::EslsCombiner esls(topology, c);
  dlms::AtcCombiner atc(topology, c);
  dlms::Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto psis = random_psis(10, 3, rng);
    for (std::size_t k = 0; k < 10; ++k) {
      CVector x(3);
      for (Eigen::Index i = 0; i < 3; ++i) x[i] = rng.complex_normal(1.0);
      const Complex d = rng.complex_normal(1.0);
      const CVector omega = esls.combine_node(k, psis, x, d);
      const auto& sel = esls.last_selection(k);
      const auto members = dlms::subset_members(topology.neighbor_set(k), sel.mask);

      // Chosen error is the error of the returned estimate.
      CHECK(std::abs(sel.error - (d - omega.dot(x))) < 1e-12);

      double best = 1e300;
      std::vector<std::size_t> best_members;
      for (const auto& subset : dlms::enumerate_subsets(topology.neighbor_set(k))) {
        const double e = std::abs(dlms::subset_error(k, subset, c, psis, x, d));
        if (e < best - 1e-12) {
          best = e;
          best_members = subset;
        }
      }
      CHECK(std::abs(sel.error) <= best + 1e-12);
      CHECK(members == best_members);
      const CVector full = atc.combine_node(k, psis, x, d);
      CHECK(std::abs(sel.error) <= std::abs(d - full.dot(x)) + 1e-12);
    }
  }
}

TEST_CASE("full-set and singleton selections reduce to ATC and standalone estimates") {
  const auto topology = dlms::NetworkTopology::from_edges(3, {{0, 1}, {1, 2}});
  const auto c = dlms::metropolis_weights(topology);
  dlms::EslsCombiner esls(topology, c);
  dlms::AtcCombiner atc(topology, c);
  const CVector x = scalar(1.0);

  // Identical psi everywhere: every subset ties, so the singleton {0} wins.
  std::vector<CVector> same(3, scalar(0.7));
  const CVector omega = esls.combine_node(1, same, x, 0.7);
  CHECK(esls.last_selection(1).mask == 1);
  CHECK(omega == same[0]);

  // Only the full-set average matches d exactly.
  const std::vector<CVector> psis{scalar(0.0), scalar(6.0), scalar(0.0)};
  const CVector full = atc.combine_node(1, psis, x, 0.0);
  const CVector chosen = esls.combine_node(1, psis, x, full[0]);
  CHECK(esls.last_selection(1).mask == 0b111);
  CHECK(std::abs(chosen[0] - full[0]) < 1e-15);

  // Only node 2's own estimate matches.
  const CVector own = esls.combine_node(2, psis, x, 0.0);
  CHECK(esls.last_selection(2).mask == 0b10);
  CHECK(own == psis[2]);
}

TEST_CASE("require_self keeps node k in every chosen subset") {
  const auto topology = dlms::generate_random_geometric(8, 0.6, 2);
  const auto c = dlms::metropolis_weights(topology);
  dlms::EslsCombiner esls(topology, c, {.renormalize = true, .require_self = true});
  dlms::Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto psis = random_psis(8, 2, rng);
    for (std::size_t k = 0; k < 8; ++k) {
      CVector x(2);
      x << rng.complex_normal(1.0), rng.complex_normal(1.0);
      esls.combine_node(k, psis, x, rng.complex_normal(1.0));
      const auto members = dlms::subset_members(topology.neighbor_set(k), esls.last_selection(k).mask);
      CHECK(std::find(members.begin(), members.end(), k) != members.end());
    }
  }
}

TEST_CASE("neighborhood cap is enforced at construction") {
  dlms::NetworkTopology star(8);
  for (std::size_t l = 1; l < 8; ++l) star.link(0, l);
  const auto c = dlms::metropolis_weights(star);
  CHECK_THROWS_AS(dlms::EslsCombiner(star, c, {.max_neighborhood = 6}), std::length_error);
  CHECK_NOTHROW(dlms::EslsCombiner(star, c, {.max_neighborhood = 8}));
}

TEST_CASE("single-node ESLS network is exactly standalone LMS") {
  const dlms::NetworkTopology topology(1);
  const auto c = dlms::metropolis_weights(topology);
  dlms::DiffusionNetwork net(topology, std::make_unique<dlms::EslsCombiner>(topology, c), {0.045}, 4);
  dlms::SignalSettings settings;
  settings.filter_length = 4;
  dlms::SignalSource signals(settings, 1, 8);
  CVector lms = CVector::Zero(4);
  for (int i = 0; i < 300; ++i) {
    signals.step();
    net.iterate(signals.regressors(), signals.measurements());
    lms = dlms::adapt(lms, signals.regressors()[0], signals.measurements()[0], 0.045);
    REQUIRE(net.estimates()[0] == lms);
  }
}

}
