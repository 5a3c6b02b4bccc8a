#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "moran/errors.hpp"
#include "moran/exact.hpp"
#include "moran/generators.hpp"
#include "support/oracles.hpp"

using namespace moran;

TEST_CASE("K_2 and neutral drift") {
  const WeightedGraph k2 = generate({Family::Complete, 2, false});
  for (double x : fixation_vector(k2, 2.0)) CHECK(x == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  for (std::size_t n = 2; n <= 8; ++n) {
    for (double x : fixation_vector(generate({Family::Complete, n, false}), 1.0)) {
      CHECK(x == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(1e-10));
    }
  }
}

TEST_CASE("complete graphs match the well-mixed formula") {
  for (std::size_t n = 2; n <= 10; ++n) {
    const WeightedGraph g = generate({Family::Complete, n, false});
    for (double r : {0.5, 2.0}) {
      const double ref = oracle::well_mixed(n, r);
      for (double x : fixation_vector(g, r)) CHECK(std::abs(x - ref) <= 1e-9);
      CHECK(std::abs(well_mixed_closed_form(n, r) - ref) <= 1e-12);
    }
  }
  CHECK(well_mixed_closed_form(3, 2.0) == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
  CHECK(well_mixed_closed_form(7, 1.0) == doctest::Approx(1.0 / 7.0));
  CHECK(well_mixed_closed_form(5000, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(well_mixed_closed_form(5000, 0.5) >= 0.0);
  CHECK(well_mixed_closed_form(5000, 0.5) < 1e-300);
}

TEST_CASE("iterative path for larger n") {
  const WeightedGraph k12 = generate({Family::Complete, 12, false});
  for (ChainKind chain : {ChainKind::Jump, ChainKind::Full}) {
    for (double x : fixation_vector(k12, 1.5, kDefaultExactLimit, chain)) {
      CHECK(std::abs(x - oracle::well_mixed(12, 1.5)) <= 1e-9);
    }
  }
}

TEST_CASE("both chains agree with the independent oracle on the corpus") {
  const auto corpus = oracle::load_corpus(MORAN_TEST_DATA "/with_self_loops.json");
  for (std::size_t i = 0; i < corpus.size(); i += 3) {
    const WeightedGraph& g = corpus[i];
    const double r = 0.7 + 0.3 * static_cast<double>(i % 5);
    const std::vector<double> ref = oracle::fixation_vector(oracle::raw_weights(g), r);
    const std::vector<double> jump = fixation_vector(g, r, kDefaultExactLimit, ChainKind::Jump);
    const std::vector<double> full = fixation_vector(g, r, kDefaultExactLimit, ChainKind::Full);
    for (std::size_t u = 0; u < g.n(); ++u) {
      CHECK(std::abs(jump[u] - ref[u]) <= 1e-10);
      CHECK(std::abs(full[u] - ref[u]) <= 1e-10);
    }
  }
}

TEST_CASE("fixation is monotone in r") {
  const auto corpus = oracle::load_corpus(MORAN_TEST_DATA "/weighted_selfloop_free.json");
  for (std::size_t i = 0; i < 40; ++i) {
    std::vector<double> prev(corpus[i].n(), 0.0);
    for (double r : {0.5, 1.0, 1.5, 2.0}) {
      const std::vector<double> rho = fixation_vector(corpus[i], r);
      for (std::size_t u = 0; u < rho.size(); ++u) CHECK(rho[u] >= prev[u] - 1e-12);
      prev = rho;
    }
  }
}

TEST_CASE("scheme averages") {
  const WeightedGraph s5 = generate({Family::Star, 5, false});
  const std::vector<double> rho = fixation_vector(s5, 2.0);
  const double u = scheme_average(s5, rho, InitScheme::uniform());
  const double t = scheme_average(s5, rho, InitScheme::temperature());
  CHECK(u > t);
  CHECK(scheme_average(s5, rho, InitScheme::convex(0.5)) == doctest::Approx((u + t) / 2).epsilon(1e-14));
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  CHECK(u >= *lo);
  CHECK(u <= *hi);
  CHECK(fixation_under_scheme(s5, 2.0, InitScheme::temperature()) == doctest::Approx(t).epsilon(1e-14));
}

TEST_CASE("exact solver preconditions") {
  CHECK_THROWS_AS(fixation_vector(generate({Family::Complete, 15, false}), 2.0), CapacityError);
  CHECK_THROWS_AS(fixation_vector(generate({Family::Complete, 8, false}), 2.0, 6), CapacityError);
  CHECK_THROWS_AS(fixation_vector(generate({Family::Complete, 3, false}), 0.0), InputError);
  GraphBuilder b(2);
  b.add_edge(0, 0, EdgeWeight::from_value(1.0));
  b.add_edge(1, 1, EdgeWeight::from_value(1.0));
  CHECK_THROWS_AS(fixation_vector(std::move(b).build(), 2.0), StructuralError);
}

TEST_CASE("biased walk and three-state bound") {
  CHECK(biased_walk_absorption(2, 0.5, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(biased_walk_absorption(5, 0.7, 5) == 1.0);
  CHECK(biased_walk_absorption(5, 0.7, 0) == 0.0);
  // Gambler's ruin with down/up ratio beta, checked against the textbook sum.
  for (double beta : {0.3, 0.9, 1.4}) {
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < 7; ++j) {
      if (j < 3) num += std::pow(beta, j);
      den += std::pow(beta, j);
    }
    CHECK(biased_walk_absorption(7, beta, 3) == doctest::Approx(num / den).epsilon(1e-12));
  }
  CHECK(three_state_bound(0.3, 0.3) == doctest::Approx(0.5));
  CHECK(three_state_bound(0.0, 0.4) == 0.0);
  CHECK(three_state_bound(2.0 / 3.0, 1.0 / 3.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(three_state_bound(0.0, 0.0), InputError);
}

TEST_CASE("branch chain absorption") {
  CHECK(mj_absorption(1, 0.5, 0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(mj_absorption(4, 0.3, 1e-13) == doctest::Approx(1.0).epsilon(1e-9));
  for (auto [m, a, q] : {std::tuple{1, 0.5, 0.5}, {3, 1.0 / 65, 1.0 / 16}, {6, 0.2, 0.01}}) {
    CHECK(std::abs(mj_absorption(m, a, q) - oracle::mj_dense(m, a, q)) <= 1e-12);
  }
  const std::uint64_t walks = 1000000;
  const std::uint64_t hits = oracle::mj_monte_carlo(3, 1.0 / 65, 1.0 / 16, walks, 12345);
  const double x = mj_absorption(3, 1.0 / 65, 1.0 / 16);
  CHECK(x >= oracle::wilson_lo(hits, walks, 2.5758293035489004));
  CHECK(x <= oracle::wilson_hi(hits, walks, 2.5758293035489004));
  CHECK_THROWS_AS(mj_absorption(0, 0.5, 0.5), InputError);
  CHECK_THROWS_AS(mj_absorption(2, 1.0, 0.5), InputError);
}
