#pragma once

#include <vector>

#include "solvable_pg/env.hpp"

namespace solvable_pg {

struct ValueSample {
  double p = 0.0;
  double v = 0.0;
  double dv_dp = 0.0;
};

/// Value and slope of one start state over an increasing p-grid in (0, 1).
struct ValueCurve {
  GamblerEnv env;
  std::vector<ValueSample> samples;
};

/// Expected return from s0 via the explicit inverse of the tridiagonal
/// Toeplitz system, with Chebyshev U_k evaluated in log space.
/// Requires 0 < p < 1 (DomainError otherwise).
double value_chebyshev(const GamblerEnv& env, double p);

/// Same quantity by direct elimination of the (L-1)-dimensional system.
double value_linear_solve(const GamblerEnv& env, double p);

/// Values of every state 1..L-1 (index s-1) by direct elimination.
std::vector<double> value_linear_solve_all(const GamblerEnv& env, double p);

/// dv/dp by a central difference on value_linear_solve with one Richardson step.
double value_derivative(const GamblerEnv& env, double p);

/// Deterministic walk: p = 0 goes straight to 0, p = 1 straight to L.
double value_degenerate(const GamblerEnv& env, double p);

/// log U_k(x) for k = 0..k_max, x >= 1.
std::vector<double> log_chebyshev_u(double x, int k_max);

/// max over interior s of the expected absorption time E_s[T].
double max_expected_duration(const GamblerEnv& env, double p);

/// Values and slopes over p_i = (i + 1) / (points + 1), i < points.
ValueCurve value_curve(const GamblerEnv& env, int points);

}  // namespace solvable_pg
