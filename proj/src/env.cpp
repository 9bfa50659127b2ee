#include "solvable_pg/env.hpp"

#include <cmath>

#include "solvable_pg/errors.hpp"

namespace solvable_pg {

std::vector<double> AlcoveEnv::default_rewards(int n, int m) {
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  r.back() = static_cast<double>(m);
  return r;
}

int AlcoveEnv::facet_of(std::span<const int> state) const {
  if (static_cast<int>(state.size()) != n) {
    throw DimensionMismatch("alcove state has " + std::to_string(state.size()) +
                            " coordinates, expected " + std::to_string(n));
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (state[i] == state[i + 1]) return i;
  }
  if (state[0] - state[n - 1] == m) return n - 1;
  throw DomainError("state " + format_state(state) + " is not on the alcove boundary");
}

double AlcoveEnv::facet_bonus(int facet) const {
  if (rewards.empty()) return default_rewards(n, m)[static_cast<std::size_t>(facet)];
  return rewards[static_cast<std::size_t>(facet)];
}

double AlcoveEnv::bonus(std::span<const int> terminal_state) const {
  return facet_bonus(facet_of(terminal_state));
}

void validate(const GamblerEnv& env) {
  if (env.L < 2) throw InvalidEnv("L must be >= 2, got " + std::to_string(env.L));
  if (env.s0 <= 0 || env.s0 >= env.L) {
    throw InvalidEnv("start state s0=" + std::to_string(env.s0) + " must satisfy 0 < s0 < L=" +
                     std::to_string(env.L));
  }
  if (!std::isfinite(env.lambda0) || !std::isfinite(env.lambdaL)) {
    throw InvalidEnv("terminal bonuses must be finite");
  }
}

void validate(const FlippedGamblerEnv& env) {
  validate(env.base);
  if (env.flipped_state != 1) {
    throw InvalidEnv("flipped_state must be 1, got " + std::to_string(env.flipped_state));
  }
}

bool in_alcove(std::span<const int> x, int m) {
  const auto n = x.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (x[i] <= x[i + 1]) return false;
  }
  return x[n - 1] > x[0] - m;
}

void validate(const AlcoveEnv& env) {
  if (env.n < 2) throw InvalidEnv("alcove dimension n must be >= 2");
  if (env.m < env.n) throw InvalidEnv("alcove scale m must be >= n for a non-empty interior");
  if (static_cast<int>(env.eta.size()) != env.n) {
    throw InvalidEnv("start state has " + std::to_string(env.eta.size()) + " coordinates, n=" +
                     std::to_string(env.n));
  }
  if (!in_alcove(env.eta, env.m)) {
    throw InvalidEnv("start state " + format_state(env.eta) + " is not strictly inside the alcove");
  }
  if (!env.rewards.empty()) {
    if (static_cast<int>(env.rewards.size()) != env.n) {
      throw InvalidEnv("rewards must list one bonus per facet (" + std::to_string(env.n) + ")");
    }
    for (double r : env.rewards) {
      if (!std::isfinite(r)) throw InvalidEnv("terminal bonuses must be finite");
    }
  }
}

bool is_terminal(const GamblerEnv& env, int state) { return state == 0 || state == env.L; }

bool is_terminal(const GamblerEnv& env, std::span<const int> state) {
  if (state.size() != 1) {
    throw DimensionMismatch("gambler state is scalar, got " + std::to_string(state.size()) +
                            " coordinates");
  }
  return is_terminal(env, state[0]);
}

bool is_terminal(const AlcoveEnv& env, std::span<const int> state) {
  if (static_cast<int>(state.size()) != env.n) {
    throw DimensionMismatch("alcove state has " + std::to_string(state.size()) +
                            " coordinates, expected " + std::to_string(env.n));
  }
  for (int i = 0; i + 1 < env.n; ++i) {
    if (state[i] == state[i + 1]) return true;
  }
  return state[0] - state[env.n - 1] == env.m;
}

AlcoveEnv alcove_from_gambler(const GamblerEnv& env) {
  AlcoveEnv a;
  a.n = 2;
  a.m = env.L;
  a.eta = {env.s0, 0};
  // facet 0 is x_0 = x_1 (s = 0), facet 1 is x_0 - x_1 = m (s = L)
  a.rewards = {env.lambda0, env.lambdaL};
  return a;
}

std::string format_state(std::span<const int> state) {
  std::string out = "(";
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(state[i]);
  }
  return out + ")";
}

}  // namespace solvable_pg
