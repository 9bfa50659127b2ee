#include <doctest.h>

#include <cmath>
#include <vector>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/retdist.hpp"
#include "solvable_pg/valuefn.hpp"

using namespace solvable_pg;

namespace {

double max_atom_gap(const ReturnDistribution& a, const ReturnDistribution& b) {
  return tvd(a, b) * 2.0;
}

}  // namespace

TEST_CASE("two-step gambler law") {
  const auto d = gambler_return_dist(GamblerEnv{4, 2, 0, 4}, 0.5, 2);
  REQUIRE(d.atoms.size() == 2);
  CHECK(d.atoms[0].t == 2);
  CHECK(d.atoms[0].prob == doctest::Approx(0.25));
  CHECK(d.atoms[1].prob == doctest::Approx(0.25));
  CHECK(d.g(d.atoms[0]) == -2.0);
  CHECK(d.g(d.atoms[1]) == 2.0);
  CHECK(d.tail_mass == doctest::Approx(0.5));
}

TEST_CASE("gambler law matches exhaustive enumeration") {
  for (int L = 2; L <= 5; ++L)
    for (int s0 = 1; s0 < L; ++s0)
      for (double p : {0.5, 0.3, 0.85}) {
        const GamblerEnv env{L, s0, 0, static_cast<double>(L)};
        const auto exact = enumerate(env, to_rational(p), 14).to_distribution();
        CHECK(max_atom_gap(gambler_return_dist(env, p, 14), exact) < 1e-12);
      }
}

TEST_CASE("mean return") {
  const GamblerEnv env{9, 3, 0, 9};
  const auto d = until_tail_below<ReturnDistribution>(1e-14, [&](int t) { return gambler_return_dist(env, 0.5, t); });
  CHECK(d.tail_mass < 1e-14);
  const double bound = truncation_bound(d, max_expected_duration(env, 0.5));
  CHECK(std::abs(mean(d) + 15.0) <= bound + 1e-12);
  CHECK(d.atom_mass() + d.tail_mass == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("coinciding returns are summed") {
  // ruin at t = 2 and success at t = 6 both return -2
  const GamblerEnv env{4, 2, 0, 4};
  const auto d = gambler_return_dist(env, 0.5, 20);
  double left = 0.0, right = 0.0;
  for (const auto& a : d.atoms) {
    if (a.terminal == 0 && a.t == 2) left += a.prob;
    if (a.terminal == 1 && a.t == 6) right += a.prob;
  }
  CHECK(left == doctest::Approx(0.25));
  CHECK(right == doctest::Approx(0.0625));
  CHECK(prob_of_return(d, -2.0) == doctest::Approx(left + right));
  const auto merged = d.merged();
  for (std::size_t i = 1; i < merged.size(); ++i) CHECK(merged[i - 1].first < merged[i].first);
}

TEST_CASE("probability validation") {
  CHECK_THROWS_AS(gambler_return_dist(GamblerEnv{}, 1.5, 10), DomainError);
  CHECK_THROWS_AS(gambler_return_dist(GamblerEnv{}, 0.5, 0), DomainError);
}

TEST_CASE("flipped law matches realized-move enumeration") {
  for (int L = 2; L <= 5; ++L)
    for (int s0 = 1; s0 < L; ++s0) {
      const FlippedGamblerEnv env{GamblerEnv{L, s0, 0, static_cast<double>(L)}, 1};
      const auto exact = enumerate(env, to_rational(0.3), to_rational(0.7), 14);
      const auto detail = flipped_return_detail(env, FlippedActionProbs::from(0.3, 0.7), 14);
      CHECK(max_atom_gap(detail.collapse(), exact.to_distribution()) < 1e-12);
      double gap = 0.0;
      for (const auto& e : exact.atoms) {
        double got = 0.0;
        for (const auto& a : detail.atoms)
          if (a.t == e.t && a.terminal == e.terminal && a.visits == e.visits) got += a.prob;
        gap = std::max(gap, std::abs(got - static_cast<double>(e.prob)));
      }
      CHECK(gap < 1e-12);
    }
}

TEST_CASE("flipped law with p1 = 1 - p2 is the plain walk") {
  for (double p : {0.2, 0.5, 0.9}) {
    const GamblerEnv base{9, 3, 0, 9};
    const auto plain = gambler_return_dist(base, p, 200);
    const auto flipped = flipped_return_dist(FlippedGamblerEnv{base, 1}, 1.0 - p, p, 200);
    REQUIRE(plain.atoms.size() == flipped.atoms.size());
    for (std::size_t i = 0; i < plain.atoms.size(); ++i) {
      CHECK(plain.atoms[i].t == flipped.atoms[i].t);
      CHECK(plain.atoms[i].terminal == flipped.atoms[i].terminal);
      CHECK(std::abs(plain.atoms[i].prob - flipped.atoms[i].prob) < 1e-12);
    }
  }
}

TEST_CASE("deterministic flipped policy") {
  const auto d = flipped_return_dist(FlippedGamblerEnv{GamblerEnv{3, 2, 0, 3}, 1}, 1.0, 1.0, 4);
  REQUIRE(d.atoms.size() == 1);
  CHECK(d.atoms[0].terminal == 1);
  CHECK(d.atoms[0].t == 1);
  CHECK(d.atoms[0].prob == 1.0);
}

TEST_CASE("alcove law") {
  SUBCASE("n = 2 is the gambler walk") {
    const GamblerEnv g{9, 3, 0, 9};
    const std::vector<double> probs{0.4, 0.6};
    const auto a = alcove_return_dist(alcove_from_gambler(g), probs, 60);
    const auto b = gambler_return_dist(g, 0.4, 60);
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t i = 0; i < a.atoms.size(); ++i) {
      CHECK(a.atoms[i].t == b.atoms[i].t);
      CHECK(a.atoms[i].prob == doctest::Approx(b.atoms[i].prob).epsilon(1e-12));
      CHECK(a.g(a.atoms[i]) == b.g(b.atoms[i]));
    }
  }
  SUBCASE("every first step terminates from (2,1,0) in D^3_3") {
    const std::vector<double> probs(3, 1.0 / 3);
    const auto d = alcove_return_dist(AlcoveEnv{3, 3, {2, 1, 0}, {}}, probs, 1);
    CHECK(d.atoms.size() == 3);
    for (const auto& a : d.atoms) CHECK(a.prob == doctest::Approx(1.0 / 3));
    CHECK(d.tail_mass == 0.0);
  }
  SUBCASE("matches enumeration") {
    for (int m = 3; m <= 5; ++m) {
      const AlcoveEnv env{3, m, {m - 1, 1, 0}, {}};
      const std::vector<Rational> exact_probs{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
      const std::vector<double> probs{0.5, 1.0 / 3, 1.0 / 6};
      const auto exact = enumerate(env, exact_probs, 12).to_distribution();
      CHECK(max_atom_gap(alcove_return_dist(env, probs, 12), exact) < 1e-12);
    }
  }
  SUBCASE("bad probabilities") {
    const std::vector<double> two{0.5, 0.5}, off{0.5, 0.4, 0.2};
    CHECK_THROWS_AS(alcove_return_dist(AlcoveEnv{}, two, 5), DimensionMismatch);
    CHECK_THROWS_AS(alcove_return_dist(AlcoveEnv{}, off, 5), DomainError);
  }
}

TEST_CASE("horizon doubling stops below the tolerance") {
  const GamblerEnv env{9, 3, 0, 9};
  const auto d = until_tail_below<ReturnDistribution>(1e-9, [&](int t) { return gambler_return_dist(env, 0.5, t); });
  CHECK(d.tail_mass < 1e-9);
  CHECK(d.t_max >= 64);
}
