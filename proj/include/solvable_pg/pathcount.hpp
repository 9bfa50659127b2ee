#pragma once

#include <cmath>
#include <type_traits>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "solvable_pg/env.hpp"
#include "solvable_pg/errors.hpp"

namespace solvable_pg {

using BigInt = boost::multiprecision::cpp_int;
using Float50 = boost::multiprecision::cpp_bin_float_50;

/// First-passage query: walks from s0 that hit `terminal` (0 or L) at exactly
/// step t without touching either barrier earlier.
struct PathCountQuery {
  int s0 = 1;
  int L = 2;
  int t = 1;
  int terminal = 0;

  bool parity_ok() const { return ((terminal - s0 + t) % 2 + 2) % 2 == 0; }
  /// Number of right steps; meaningful only when parity_ok().
  int right_steps() const { return (terminal - s0 + t) / 2; }
};

struct AlcoveCountQuery {
  std::vector<int> eta;
  std::vector<int> nu;
  int n = 0;
  int m = 0;

  int steps() const;
};

/// Alternating image sum of shifted binomials, exact.
BigInt count_binomial(const PathCountQuery& q);

namespace detail {
void check_query(const PathCountQuery& q);
/// Sum of the paired trigonometric terms, still unrounded.
template <class Real>
Real trig_sum(const PathCountQuery& q) {
  using std::cos;
  using std::pow;
  using std::sin;
  const int tp = q.t - 1;
  const int rp = q.terminal == 0 ? q.right_steps() : q.right_steps() - 1;
  const Real pi = boost::math::constants::pi<Real>();
  Real total = 0;
  for (int k = 1; 2 * k <= q.L; ++k) {
    // k = L/2 pairs with itself; it only survives at t' = 0
    const Real weight = 2 * k < q.L ? Real(2) : Real(1);
    const Real x = pi * k / q.L;
    const Real c = tp == 0 ? Real(1) : Real(pow(2 * cos(x), tp));
    total += weight * c * sin(x * q.s0) * sin(x * (2 * rp + q.s0 - tp));
  }
  return total * 2 / q.L;
}
}  // namespace detail

/// Trigonometric closed form evaluated in `Real` and rounded. Throws
/// PrecisionLoss when the distance to the nearest integer is >= 0.25.
template <class Real = Float50>
BigInt count_trig(const PathCountQuery& q) {
  detail::check_query(q);
  if (!q.parity_ok()) return 0;
  if (q.right_steps() < 0 || q.right_steps() > q.t) return 0;
  const Real value = detail::trig_sum<Real>(q);
  using std::round;
  const Real nearest = round(value);
  using std::abs;
  const double residual = static_cast<double>(abs(value - nearest));
  if (!(residual < 0.25) || nearest < 0) throw PrecisionLoss(residual);
  if constexpr (std::is_floating_point_v<Real>) {
    return BigInt(static_cast<long long>(nearest));
  } else {
    return nearest.template convert_to<BigInt>();
  }
}

/// Table of alive-path counts indexed [t][s], t = 0..t_max, s = 0..L. Entries
/// on s = 0 and s = L hold first-passage counts at step t (they never propagate).
using AliveTable = std::vector<std::vector<BigInt>>;
AliveTable alive_counts_dp(const GamblerEnv& env, int t_max);

/// Walks of positive unit steps from eta to nu staying strictly inside the
/// alcove (both endpoints interior). Signed sum over permutations and lattice
/// shifts; terms with a negative factorial argument vanish.
BigInt alcove_count(const AlcoveCountQuery& q);

/// Realized trajectories of length t ending at `terminal` that stand on the
/// flipped state at exactly v1 time steps in [0, t). Built from first-passage
/// segments of reduced gambler problems.
BigInt flipped_trajectory_count(const FlippedGamblerEnv& env, int t, int v1, int terminal);

/// All flipped counts at once: result[terminal_index][v1][t] for t <= t_max,
/// terminal_index 0 -> state 0, 1 -> state L.
std::vector<std::vector<std::vector<BigInt>>> flipped_count_table(const FlippedGamblerEnv& env,
                                                                  int t_max);

/// Binomial coefficient with C(n, k) = 0 outside 0 <= k <= n.
BigInt binomial(int n, int k);

}  // namespace solvable_pg
