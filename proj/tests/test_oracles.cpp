#include <doctest.h>

#include <cmath>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/retdist.hpp"
#include "solvable_pg/valuefn.hpp"

using namespace solvable_pg;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK_THROWS_AS(parse_rational("x"), DomainError);
  CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
  CHECK(to_rational(0.5) == Rational(1, 2));
}

TEST_CASE("enumeration conserves mass exactly") {
  const auto r = enumerate(GamblerEnv{5, 2, 0, 5}, Rational(1, 3), 12);
  CHECK(r.covered_mass == 1);
  Rational s = r.alive;
  for (const auto& a : r.atoms) s += a.prob;
  CHECK(s == 1);
  const auto f = enumerate(FlippedGamblerEnv{GamblerEnv{4, 2, 0, 4}, 1}, Rational(1, 5), Rational(2, 3), 10);
  CHECK(f.covered_mass == 1);
  const std::vector<Rational> probs{Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  CHECK(enumerate(AlcoveEnv{3, 4, {3, 1, 0}, {}}, probs, 9).covered_mass == 1);
}

TEST_CASE("enumeration size guard") {
  CHECK_THROWS_AS(enumerate(GamblerEnv{}, Rational(1, 2), 40), TooLarge);
  CHECK_THROWS_AS(enumerate(GamblerEnv{}, Rational(1, 2), 0), DomainError);
}

TEST_CASE("hitting probabilities and times") {
  const auto h = hitting_solve(GamblerEnv{9, 3, 0, 9}, 0.5);
  CHECK(h.expected_time == doctest::Approx(18.0));
  CHECK(h.prob_right == doctest::Approx(1.0 / 3));
  CHECK(h.value == doctest::Approx(-15.0));
  const double r = 0.6 / 0.4;
  const auto b = hitting_solve(GamblerEnv{9, 3, 0, 9}, 0.4);
  CHECK(b.prob_right == doctest::Approx((1 - std::pow(r, 3)) / (1 - std::pow(r, 9))));
  CHECK(b.value == doctest::Approx(value_linear_solve(GamblerEnv{9, 3, 0, 9}, 0.4)).epsilon(1e-12));
}

TEST_CASE("exact values and slopes at p = 1/2") {
  const GamblerEnv base{9, 3, 0, 9};
  CHECK(exact_value(base, Rational(1, 2)).value == -15);
  CHECK(exact_value(base, Rational(1, 2)).slope == 0);
  const Rational expect[] = {Rational(-64, 3), Rational(-56, 3), Rational(0)};
  for (int s0 = 1; s0 <= 3; ++s0) {
    GamblerEnv env{9, s0, 0, 9};
    CHECK(exact_value(env, Rational(1, 2)).slope == expect[s0 - 1]);
  }
}

TEST_CASE("Monte Carlo is reproducible and consistent") {
  const GamblerEnv env{5, 2, 0, 5};
  SimulationOptions o;
  o.episodes = 200000;
  o.seed = 42;
  const auto a = simulate(env, 0.5, o);
  const auto b = simulate(env, 0.5, o);
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) CHECK(a.atoms[i].prob == b.atoms[i].prob);
  const auto exact = until_tail_below<ReturnDistribution>(1e-12, [&](int t) { return gambler_return_dist(env, 0.5, t); });
  CHECK(tvd(a.to_distribution(), exact) < 0.02);
  o.seed = 43;
  const auto c = simulate(env, 0.5, o);
  CHECK(tvd(a.to_distribution(), c.to_distribution()) > 0.0);
}

TEST_CASE("deterministic Monte Carlo") {
  SimulationOptions o;
  o.episodes = 1000;
  const auto r = simulate(GamblerEnv{9, 3, 0, 9}, 1.0, o);
  REQUIRE(r.atoms.size() == 1);
  CHECK(r.atoms[0].t == 6);
  CHECK(r.atoms[0].prob == 1.0);
  const auto f = simulate(FlippedGamblerEnv{GamblerEnv{3, 2, 0, 3}, 1}, 1.0, 1.0, o);
  REQUIRE(f.atoms.size() == 1);
  CHECK(f.atoms[0].t == 1);
}

TEST_CASE("alcove trajectory ends on the boundary") {
  const AlcoveEnv env{3, 6, {3, 1, 0}, {}};
  const std::vector<double> probs(3, 1.0 / 3);
  const auto path = sample_trajectory(env, probs, 62);
  CHECK(path.front() == std::vector<int>{3, 1, 0});
  CHECK(is_terminal(env, path.back()));
  for (std::size_t i = 1; i + 1 < path.size(); ++i) CHECK(in_alcove(path[i], 6));
  CHECK(sample_trajectory(env, probs, 62) == path);
}

TEST_CASE("tvd") {
  const auto a = gambler_return_dist(GamblerEnv{4, 2, 0, 4}, 0.5, 200);
  CHECK(tvd(a, a) == 0.0);
  const auto b = gambler_return_dist(GamblerEnv{4, 2, 0, 4}, 0.6, 200);
  CHECK(tvd(a, b) > 0.0);
  CHECK(tvd(a, b) <= 1.0);
}
