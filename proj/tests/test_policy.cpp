#include <doctest.h>

#include <cmath>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/policy.hpp"
#include "solvable_pg/valuefn.hpp"

using namespace solvable_pg;

TEST_CASE("Boltzmann policy") {
  for (double tau : {0.5, 1.0, 3.0})
    for (double eps : {0.0, 0.1})
      for (double theta : {-30.0, -2.0, 0.0, 0.7, 40.0}) {
        const BoltzmannPolicy1D pi{theta, tau, eps};
        CHECK(pi.prob_plus() + pi.prob_minus() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(pi.prob_plus() == doctest::Approx((1 - eps) * (1 + std::tanh(theta / tau)) / 2 + eps / 2));
        const double h = 1e-6;
        for (int a : {-1, 1}) {
          const double fd = (std::log(BoltzmannPolicy1D{theta + h, tau, eps}.action_prob(a)) -
                             std::log(BoltzmannPolicy1D{theta - h, tau, eps}.action_prob(a))) /
                            (2 * h);
          if (std::abs(theta) < 10) CHECK(pi.log_grad(a) == doctest::Approx(fd).epsilon(1e-6));
        }
      }
}

TEST_CASE("saturated tails keep their complement") {
  const BoltzmannPolicy1D pi{30.0, 1.0, 0.0};
  CHECK(pi.prob_minus() > 0.0);
  CHECK(pi.prob_minus() == doctest::Approx(std::exp(-60.0)).epsilon(1e-10));
}

TEST_CASE("theta_for inverts prob_plus") {
  for (double eps : {0.0, 0.2})
    for (double pi : {0.11, 0.5, 0.56, 0.89}) {
      const double th = BoltzmannPolicy1D::theta_for(pi, 2.0, eps);
      CHECK(BoltzmannPolicy1D{th, 2.0, eps}.prob_plus() == doctest::Approx(pi).epsilon(1e-13));
    }
  CHECK_THROWS_AS(BoltzmannPolicy1D::theta_for(0.05, 1.0, 0.2), DomainError);
  CHECK_THROWS_AS(BoltzmannPolicy1D::theta_for(1.0), DomainError);
}

TEST_CASE("gradient mean is the policy gradient") {
  const GamblerEnv env{6, 2, 0, 6};
  for (double theta : {-0.3, 0.0, 0.4}) {
    const BoltzmannPolicy1D pi{theta, 1.0, 0.0};
    const auto d = gradient_dist_1d(env, pi, 2000);
    CHECK(d.tail_mass < 1e-12);
    CHECK(d.atom_mass() + d.tail_mass == doctest::Approx(1.0).epsilon(1e-12));
    const double expect = value_derivative(env, pi.prob_plus()) * pi.dprob();
    CHECK(d.mean()[0] == doctest::Approx(expect).epsilon(1e-7));
  }
}

TEST_CASE("two-parameter gradient mean matches finite differences") {
  const FlippedGamblerEnv env{GamblerEnv{5, 2, 0, 5}, 1};
  const TwoParamPolicy pol{0.2, -0.1, 1.0, 0.0};
  const auto d = gradient_dist_flipped(env, pol, 1500);
  REQUIRE(d.dim() == 2);
  CHECK(d.tail_mass < 1e-12);
  auto value = [&](double tf, double tr) {
    const auto r = flipped_return_dist(env, TwoParamPolicy{tf, tr}.flipped().prob_plus(),
                                       TwoParamPolicy{tf, tr}.regular().prob_plus(), 1500);
    return mean(r);
  };
  const double h = 1e-5;
  const double gf = (value(pol.theta_f + h, pol.theta_r) - value(pol.theta_f - h, pol.theta_r)) / (2 * h);
  const double gr = (value(pol.theta_f, pol.theta_r + h) - value(pol.theta_f, pol.theta_r - h)) / (2 * h);
  const auto m = d.mean();
  CHECK(m[0] == doctest::Approx(gf).epsilon(1e-5));
  CHECK(m[1] == doctest::Approx(gr).epsilon(1e-5));
}

TEST_CASE("merge_atoms combines equal gradients") {
  const auto d = merge_atoms({{{1.0}, 0.25}, {{2.0}, 0.25}, {{1.0}, 0.5}}, 0.0);
  REQUIRE(d.atoms.size() == 2);
  CHECK(d.atom_mass() == doctest::Approx(1.0));
}
