#include "solvable_pg/valuefn.hpp"

#include <algorithm>
#include <cmath>

#include "solvable_pg/errors.hpp"

namespace solvable_pg {

namespace {

void require_open_unit(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("p must lie strictly inside (0, 1); use value_degenerate for p in {0, 1}");
  }
}

// Thomas elimination for -q v_{i-1} + v_i - p v_{i+1} = rhs_i, i = 0..N-1.
std::vector<double> solve_walk_system(double p, double q, std::vector<double> rhs) {
  const auto n = rhs.size();
  std::vector<double> c(n, 0.0);
  double denom = 1.0;
  c[0] = -p / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = 1.0 + q * c[i - 1];
    c[i] = -p / denom;
    rhs[i] = (rhs[i] + q * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace

std::vector<double> log_chebyshev_u(double x, int k_max) {
  std::vector<double> out(static_cast<std::size_t>(std::max(k_max, 0)) + 1, 0.0);
  // U_k / U_{k-1} obeys r_k = 2x - 1 / r_{k-1} and stays >= 1 for x >= 1
  double ratio = 2.0 * x;
  for (int k = 1; k <= k_max; ++k) {
    out[k] = out[k - 1] + std::log(ratio);
    ratio = 2.0 * x - 1.0 / ratio;
  }
  return out;
}

double value_chebyshev(const GamblerEnv& env, double p) {
  validate(env);
  require_open_unit(p);
  const int L = env.L;
  const double q = 1.0 - p;
  const double x = 1.0 / (2.0 * std::sqrt(p * q));
  const auto log_u = log_chebyshev_u(x, L);
  const double log_pq = std::log(p * q);
  // (J^-1)_{ij} for i <= j is I_{i,j,L}(a, b) with a the coupling toward j
  auto log_entry = [&](int i, int j, double log_a) {
    return (j - i) * log_a + 0.5 * (i - j - 1) * log_pq + log_u[i] + log_u[L - j - 2] - log_u[L - 1];
  };
  const int row = env.s0 - 1;
  double v = 0.0;
  for (int col = 0; col <= L - 2; ++col) {
    double rhs = -1.0;
    if (col == 0) rhs += q * env.lambda0;
    if (col == L - 2) rhs += p * env.lambdaL;
    const double log_e = col <= row ? log_entry(col, row, std::log(q)) : log_entry(row, col, std::log(p));
    v += std::exp(log_e) * rhs;
  }
  return v;
}

std::vector<double> value_linear_solve_all(const GamblerEnv& env, double p) {
  validate(env);
  require_open_unit(p);
  const double q = 1.0 - p;
  std::vector<double> rhs(static_cast<std::size_t>(env.L - 1), -1.0);
  rhs.front() += q * env.lambda0;
  rhs.back() += p * env.lambdaL;
  return solve_walk_system(p, q, std::move(rhs));
}

double value_linear_solve(const GamblerEnv& env, double p) {
  return value_linear_solve_all(env, p)[static_cast<std::size_t>(env.s0 - 1)];
}

double value_derivative(const GamblerEnv& env, double p) {
  validate(env);
  require_open_unit(p);
  const double h = std::max(1e-6, 1e-6 * std::abs(p));
  if (p - h <= 0.0 || p + h >= 1.0) throw DomainError("p too close to 0 or 1 for the difference step");
  auto central = [&](double step) {
    return (value_linear_solve(env, p + step) - value_linear_solve(env, p - step)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double value_degenerate(const GamblerEnv& env, double p) {
  validate(env);
  if (p == 0.0) return env.lambda0 - env.s0;
  if (p == 1.0) return env.lambdaL - (env.L - env.s0);
  throw DomainError("value_degenerate needs p in {0, 1}");
}

double max_expected_duration(const GamblerEnv& env, double p) {
  if (!(p > 0.0 && p < 1.0)) return static_cast<double>(env.L);
  const auto v = value_linear_solve_all(GamblerEnv{env.L, env.s0, 0.0, 0.0}, p);
  return -*std::min_element(v.begin(), v.end());
}

ValueCurve value_curve(const GamblerEnv& env, int points) {
  if (points < 1) throw DomainError("value curve needs at least one point");
  ValueCurve curve{env, {}};
  curve.samples.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double p = static_cast<double>(i + 1) / (points + 1);
    curve.samples.push_back({p, value_linear_solve(env, p), value_derivative(env, p)});
  }
  return curve;
}

}  // namespace solvable_pg
