#include <doctest.h>

#include <cmath>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/valuefn.hpp"

using namespace solvable_pg;

TEST_CASE("ruin value at p = 1/2") {
  const GamblerEnv env{9, 3, 0, 9};
  CHECK(value_chebyshev(env, 0.5) == doctest::Approx(-15.0).epsilon(1e-12));
  CHECK(value_linear_solve(env, 0.5) == doctest::Approx(-15.0).epsilon(1e-12));
}

TEST_CASE("closed form agrees with elimination") {
  double worst = 0.0;
  for (int L = 2; L <= 40; ++L)
    for (int s0 = 1; s0 < L; ++s0)
      for (double p = 0.01; p < 0.995; p += 0.049) {
        const GamblerEnv env{L, s0, 0.0, static_cast<double>(L)};
        const double a = value_chebyshev(env, p), b = value_linear_solve(env, p);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
  CHECK(worst < 1e-10);
}

TEST_CASE("last interior state keeps the lambda_L term") {
  const GamblerEnv env{9, 8, 2, 11};
  CHECK(value_chebyshev(env, 0.3) == doctest::Approx(value_linear_solve(env, 0.3)).epsilon(1e-12));
}

TEST_CASE("reflection symmetry") {
  const GamblerEnv env{9, 3, 1, 9};
  for (double p : {0.2, 0.5, 0.7})
    CHECK(value_linear_solve(env, p) == doctest::Approx(value_linear_solve(env.reflected(), 1.0 - p)).epsilon(1e-12));
}

TEST_CASE("derivative against exact rational slope") {
  for (int s0 = 1; s0 <= 8; ++s0) {
    const GamblerEnv env{9, s0, 0, 9};
    for (const char* p : {"1/2", "1/5", "7/10"}) {
      const Rational q = parse_rational(p);
      const double exact = static_cast<double>(exact_value(env, q).slope);
      CHECK(value_derivative(env, static_cast<double>(q)) == doctest::Approx(exact).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("degenerate policies") {
  const GamblerEnv env{9, 3, 0, 9};
  CHECK(value_degenerate(env, 0.0) == -3.0);
  CHECK(value_degenerate(env, 1.0) == 3.0);
  CHECK_THROWS_AS(value_degenerate(env, 0.5), DomainError);
  CHECK_THROWS_AS(value_chebyshev(env, 0.0), DomainError);
}

TEST_CASE("log Chebyshev U") {
  for (double x : {1.0, 1.3, 4.0}) {
    const auto lu = log_chebyshev_u(x, 30);
    double u0 = 1.0, u1 = 2.0 * x;
    CHECK(std::exp(lu[0]) == doctest::Approx(u0));
    CHECK(std::exp(lu[1]) == doctest::Approx(u1));
    for (int k = 2; k <= 30; ++k) {
      const double u2 = 2.0 * x * u1 - u0;
      CHECK(std::exp(lu[k]) == doctest::Approx(u2).epsilon(1e-10));
      u0 = u1;
      u1 = u2;
    }
  }
}

TEST_CASE("value curve") {
  const auto c = value_curve(GamblerEnv{9, 3, 0, 9}, 7);
  REQUIRE(c.samples.size() == 7);
  CHECK(c.samples[3].p == doctest::Approx(0.5));
  CHECK(c.samples[3].v == doctest::Approx(-15.0));
  CHECK(std::abs(c.samples[3].dv_dp) < 1e-6);
}
