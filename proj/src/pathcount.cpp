#include "solvable_pg/pathcount.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace solvable_pg {

namespace {

std::vector<BigInt> factorials(int n) {
  std::vector<BigInt> f(static_cast<std::size_t>(n) + 1);
  f[0] = 1;
  for (int i = 1; i <= n; ++i) f[i] = f[i - 1] * i;
  return f;
}

// First-passage counts of a gambler walk on {0..L}: fp[0][t] at 0, fp[1][t] at L.
// L = 1 is the degenerate walk where every first step terminates.
std::array<std::vector<BigInt>, 2> first_passage(int L, int s0, int t_max) {
  std::array<std::vector<BigInt>, 2> fp{std::vector<BigInt>(t_max + 1), std::vector<BigInt>(t_max + 1)};
  if (s0 == 0) {
    fp[0][0] = 1;
    return fp;
  }
  if (s0 == L) {
    fp[1][0] = 1;
    return fp;
  }
  const auto table = alive_counts_dp(GamblerEnv{L, s0, 0.0, 0.0}, t_max);
  for (int t = 0; t <= t_max; ++t) {
    fp[0][t] = table[t][0];
    fp[1][t] = table[t][L];
  }
  return fp;
}

std::vector<BigInt> convolve(const std::vector<BigInt>& a, const std::vector<BigInt>& b, int t_max) {
  std::vector<BigInt> out(static_cast<std::size_t>(t_max) + 1);
  for (int i = 0; i <= t_max; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= t_max; ++j) {
      if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

}  // namespace

namespace detail {
void check_query(const PathCountQuery& q) {
  if (q.L < 2) throw InvalidEnv("L must be >= 2");
  if (q.s0 <= 0 || q.s0 >= q.L) throw InvalidEnv("start state must satisfy 0 < s0 < L");
  if (q.t < 1) throw DomainError("step count t must be >= 1");
  if (q.terminal != 0 && q.terminal != q.L) throw DomainError("terminal must be 0 or L");
}
}  // namespace detail

int AlcoveCountQuery::steps() const {
  return std::accumulate(nu.begin(), nu.end(), 0) - std::accumulate(eta.begin(), eta.end(), 0);
}

BigInt binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt count_binomial(const PathCountQuery& q) {
  detail::check_query(q);
  if (!q.parity_ok()) return 0;
  const int tp = q.t - 1;
  const int rp = q.terminal == 0 ? q.right_steps() : q.right_steps() - 1;
  if (rp < 0 || rp > tp) return 0;
  // |kL| <= t' + s0 covers every nonzero binomial
  const int k_max = (tp + q.s0) / q.L + 1;
  std::vector<BigInt> row(static_cast<std::size_t>(tp) + 1);
  row[0] = 1;
  for (int i = 1; i <= tp; ++i) row[i] = row[i - 1] * (tp - i + 1) / i;
  auto c = [&](int k) -> BigInt { return (k < 0 || k > tp) ? BigInt(0) : row[k]; };
  BigInt total = 0;
  for (int k = -k_max; k <= k_max; ++k) {
    total += c(rp + k * q.L);
    total -= c(rp + q.s0 + k * q.L);
  }
  return total;
}

AliveTable alive_counts_dp(const GamblerEnv& env, int t_max) {
  validate(env);
  if (t_max < 0) throw DomainError("t_max must be >= 0");
  const int L = env.L;
  AliveTable table(static_cast<std::size_t>(t_max) + 1, std::vector<BigInt>(L + 1));
  table[0][env.s0] = 1;
  for (int t = 1; t <= t_max; ++t) {
    const auto& prev = table[t - 1];
    auto& cur = table[t];
    for (int s = 1; s < L; ++s) {
      if (prev[s] == 0) continue;
      cur[s - 1] += prev[s];
      cur[s + 1] += prev[s];
    }
  }
  return table;
}

BigInt alcove_count(const AlcoveCountQuery& q) {
  if (q.n < 1 || static_cast<int>(q.eta.size()) != q.n || static_cast<int>(q.nu.size()) != q.n) {
    throw DimensionMismatch("alcove count query needs n-vectors eta and nu");
  }
  if (!in_alcove(q.eta, q.m)) throw InvalidEnv("eta must be strictly inside the alcove");
  const int T = q.steps();
  if (T < 0) return 0;
  const auto fact = factorials(T);
  const int n = q.n;
  const int j_cap = ceil_div(T + q.m, q.m);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> lo(n), hi(n), j(n);
  BigInt total = 0;
  do {
    const int sign = permutation_sign(perm);
    // shifts with 0 <= m j_i + nu_sigma(i) - eta_i <= T
    for (int i = 0; i < n; ++i) {
      const int base = q.nu[perm[i]] - q.eta[i];
      lo[i] = std::max(-j_cap, ceil_div(-base, q.m));
      hi[i] = std::min(j_cap, floor_div(T - base, q.m));
    }
    BigInt partial = 0;
    // odometer over j_0..j_{n-2}; j_{n-1} closes the zero-sum constraint
    bool empty = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (lo[i] > hi[i]) empty = true;
      j[i] = lo[i];
    }
    while (!empty) {
      int sum = 0;
      for (int i = 0; i + 1 < n; ++i) sum += j[i];
      j[n - 1] = -sum;
      if (j[n - 1] >= lo[n - 1] && j[n - 1] <= hi[n - 1]) {
        BigInt denom = 1;
        for (int i = 0; i < n; ++i) denom *= fact[q.m * j[i] + q.nu[perm[i]] - q.eta[i]];
        partial += fact[T] / denom;
      }
      int i = 0;
      for (; i + 1 < n; ++i) {
        if (++j[i] <= hi[i]) break;
        j[i] = lo[i];
      }
      if (i + 1 >= n) break;
    }
    total += sign * partial;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::vector<std::vector<std::vector<BigInt>>> flipped_count_table(const FlippedGamblerEnv& env,
                                                                  int t_max) {
  validate(env);
  const int L = env.base.L;
  const int s0 = env.base.s0;
  const auto size = static_cast<std::size_t>(t_max) + 1;
  std::vector<std::vector<std::vector<BigInt>>> out(
      2, std::vector<std::vector<BigInt>>(size, std::vector<BigInt>(size)));
  if (t_max < 1) return out;

  // The walk restricted to {1..L} is a gambler walk with L' = L - 1 whose
  // left barrier is the flipped state.
  const int Lr = L - 1;
  // s0 -> first arrival at state 1 (without reaching L), and s0 -> L avoiding 1
  std::vector<BigInt> arrive(size), avoid(size);
  if (s0 == 1) {
    arrive[0] = 1;
  } else {
    auto fp = first_passage(Lr, s0 - 1, t_max);
    arrive = fp[0];
    avoid = fp[1];
  }
  // From state 1 the realized move right lands on 2, then a first passage of
  // the reduced walk from 1: back to state 1 (a return) or on to L (an exit).
  std::vector<BigInt> ret(size), exit_right(size), exit_left(size);
  exit_left[1] = 1;
  {
    auto fp = first_passage(Lr, 1, t_max - 1);
    for (int t = 1; t <= t_max; ++t) {
      ret[t] = fp[0][t - 1];
      exit_right[t] = fp[1][t - 1];
    }
  }

  for (int t = 1; t <= t_max; ++t) out[1][0][t] = avoid[t];
  std::vector<BigInt> walk = arrive;  // paths ending at their v-th visit
  for (int v = 1; v <= t_max; ++v) {
    const auto to_zero = convolve(walk, exit_left, t_max);
    const auto to_end = convolve(walk, exit_right, t_max);
    bool any = false;
    for (int t = 1; t <= t_max; ++t) {
      out[0][v][t] = to_zero[t];
      out[1][v][t] = to_end[t];
      any = any || walk[t - 1] != 0;
    }
    if (!any) break;
    walk = convolve(walk, ret, t_max);
  }
  return out;
}

BigInt flipped_trajectory_count(const FlippedGamblerEnv& env, int t, int v1, int terminal) {
  validate(env);
  if (terminal != 0 && terminal != env.base.L) throw DomainError("terminal must be 0 or L");
  if (v1 < 0 || t < 1 || v1 > t) return 0;
  const auto table = flipped_count_table(env, t);
  return table[terminal == 0 ? 0 : 1][v1][t];
}

}  // namespace solvable_pg
