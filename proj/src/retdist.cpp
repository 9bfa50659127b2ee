#include "solvable_pg/retdist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "solvable_pg/errors.hpp"

namespace solvable_pg {

namespace {

std::vector<Terminal> gambler_terminals(const GamblerEnv& env) {
  return {Terminal{{0}, env.lambda0}, Terminal{{env.L}, env.lambdaL}};
}

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

double ReturnDistribution::atom_mass() const {
  double total = 0.0;
  for (const auto& a : atoms) total += a.prob;
  return total;
}

std::vector<std::pair<double, double>> ReturnDistribution::merged() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.emplace_back(g(a), a.prob);
  std::sort(out.begin(), out.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [g, p] : out) {
    if (!merged.empty() && std::abs(merged.back().first - g) <= 1e-12) {
      merged.back().second += p;
    } else {
      merged.emplace_back(g, p);
    }
  }
  return merged;
}

double mean(const ReturnDistribution& dist) {
  double total = 0.0;
  for (const auto& a : dist.atoms) total += a.prob * dist.g(a);
  return total;
}

double prob_of_return(const ReturnDistribution& dist, double g) {
  double total = 0.0;
  for (const auto& a : dist.atoms) {
    if (std::abs(dist.g(a) - g) <= 1e-12) total += a.prob;
  }
  return total;
}

double truncation_bound(const ReturnDistribution& dist, double residual_time) {
  double max_bonus = 0.0;
  for (const auto& term : dist.terminals) max_bonus = std::max(max_bonus, std::abs(term.bonus));
  return dist.tail_mass * (dist.t_max + max_bonus + residual_time);
}

ReturnDistribution gambler_return_dist(const GamblerEnv& env, double p, int t_max) {
  check_prob(p, "p");
  return gambler_return_dist(env, p, 1.0 - p, t_max);
}

ReturnDistribution gambler_return_dist(const GamblerEnv& env, double p_right, double p_left,
                                       int t_max) {
  validate(env);
  check_prob(p_right, "p_right");
  check_prob(p_left, "p_left");
  if (t_max < 1) throw DomainError("t_max must be >= 1");
  const int L = env.L;
  ReturnDistribution dist;
  dist.terminals = gambler_terminals(env);
  dist.t_max = t_max;

  std::vector<double> alive(L + 1, 0.0), next(L + 1, 0.0);
  alive[env.s0] = 1.0;
  for (int t = 1; t <= t_max; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 1; s < L; ++s) {
      const double m = alive[s];
      if (m == 0.0) continue;
      next[s + 1] += m * p_right;
      next[s - 1] += m * p_left;
    }
    if (next[0] > 0.0) dist.atoms.push_back({0, t, next[0]});
    if (next[L] > 0.0) dist.atoms.push_back({1, t, next[L]});
    next[0] = next[L] = 0.0;
    std::swap(alive, next);
  }
  dist.tail_mass = std::accumulate(alive.begin(), alive.end(), 0.0);
  return dist;
}

ReturnDistribution FlippedReturnDistribution::collapse() const {
  ReturnDistribution out;
  out.terminals = terminals;
  out.tail_mass = tail_mass;
  out.t_max = t_max;
  std::map<std::pair<int, int>, double> by_key;  // (t, terminal)
  for (const auto& a : atoms) by_key[{a.t, a.terminal}] += a.prob;
  for (const auto& [key, prob] : by_key) out.atoms.push_back({key.second, key.first, prob});
  return out;
}

FlippedReturnDistribution flipped_return_detail(const FlippedGamblerEnv& env,
                                                const FlippedActionProbs& probs, int t_max) {
  validate(env);
  check_prob(probs.p1, "p1");
  check_prob(probs.q1, "1 - p1");
  check_prob(probs.p2, "p2");
  check_prob(probs.q2, "1 - p2");
  if (t_max < 1) throw DomainError("t_max must be >= 1");
  const int L = env.base.L;
  FlippedReturnDistribution dist;
  dist.terminals = gambler_terminals(env.base);
  dist.t_max = t_max;

  // alive[s][v]: mass on state s having stood on the flipped state v times
  std::vector<std::vector<double>> alive(L + 1), next(L + 1);
  for (auto& row : alive) row.assign(1, 0.0);
  alive[env.base.s0][0] = 1.0;
  int v_max = 0;
  std::vector<double> to_zero, to_end;
  for (int t = 1; t <= t_max; ++t) {
    const int width = v_max + 2;
    for (auto& row : next) row.assign(width, 0.0);
    to_zero.assign(width, 0.0);
    to_end.assign(width, 0.0);
    for (int s = 1; s < L; ++s) {
      const auto& row = alive[s];
      for (int v = 0; v < static_cast<int>(row.size()); ++v) {
        const double m = row[v];
        if (m == 0.0) continue;
        if (s == env.flipped_state) {
          // sampled +1 moves left into 0, sampled -1 moves right
          to_zero[v + 1] += m * probs.p1;
          if (s + 1 == L) {
            to_end[v + 1] += m * probs.q1;
          } else {
            next[s + 1][v + 1] += m * probs.q1;
          }
        } else {
          if (s + 1 == L) {
            to_end[v] += m * probs.p2;
          } else {
            next[s + 1][v] += m * probs.p2;
          }
          next[s - 1][v] += m * probs.q2;
        }
      }
    }
    for (int v = 0; v < width; ++v) {
      if (to_zero[v] > 0.0) dist.atoms.push_back({0, t, v, to_zero[v]});
      if (to_end[v] > 0.0) dist.atoms.push_back({1, t, v, to_end[v]});
    }
    std::swap(alive, next);
    v_max = width - 1;
  }
  double tail = 0.0;
  for (int s = 1; s < L; ++s) {
    for (double m : alive[s]) tail += m;
  }
  dist.tail_mass = tail;
  return dist;
}

ReturnDistribution flipped_return_dist(const FlippedGamblerEnv& env, double p1, double p2,
                                       int t_max) {
  return flipped_return_detail(env, FlippedActionProbs::from(p1, p2), t_max).collapse();
}

ReturnDistribution alcove_return_dist(const AlcoveEnv& env, std::span<const double> action_probs,
                                      int t_max) {
  validate(env);
  const int n = env.n;
  if (static_cast<int>(action_probs.size()) != n) {
    throw DimensionMismatch("alcove policy needs " + std::to_string(n) + " action probabilities");
  }
  double sum = 0.0;
  for (double p : action_probs) {
    check_prob(p, "action probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("action probabilities must sum to 1");
  if (t_max < 1) throw DomainError("t_max must be >= 1");

  ReturnDistribution dist;
  dist.t_max = t_max;
  std::map<std::vector<int>, int> terminal_index;
  std::map<std::vector<int>, double> layer{{env.eta, 1.0}}, next_layer;
  for (int t = 1; t <= t_max; ++t) {
    next_layer.clear();
    std::map<int, double> hits;  // terminal index -> mass at this step
    for (const auto& [x, m] : layer) {
      for (int i = 0; i < n; ++i) {
        const double w = m * action_probs[i];
        if (w == 0.0) continue;
        auto y = x;
        ++y[i];
        if (in_alcove(y, env.m)) {
          next_layer[y] += w;
        } else {
          auto [it, fresh] = terminal_index.try_emplace(y, static_cast<int>(dist.terminals.size()));
          if (fresh) dist.terminals.push_back({y, env.bonus(y)});
          hits[it->second] += w;
        }
      }
    }
    for (const auto& [idx, m] : hits) dist.atoms.push_back({idx, t, m});
    std::swap(layer, next_layer);
  }
  double tail = 0.0;
  for (const auto& [x, m] : layer) tail += m;
  dist.tail_mass = tail;
  return dist;
}

}  // namespace solvable_pg
