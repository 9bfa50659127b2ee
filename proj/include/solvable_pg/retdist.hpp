#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "solvable_pg/env.hpp"

namespace solvable_pg {

/// A terminal state together with the bonus paid on reaching it.
struct Terminal {
  std::vector<int> state;
  double bonus = 0.0;
};

/// Probability of terminating on `terminals[terminal]` at step t.
struct ReturnAtom {
  int terminal = 0;
  int t = 0;
  double prob = 0.0;
};

/// Exact law of the episodic return up to a horizon. Atoms are keyed by
/// (terminal, t) and only merged by return value inside queries, so two
/// terminals whose returns coincide stay distinguishable.
struct ReturnDistribution {
  std::vector<Terminal> terminals;
  std::vector<ReturnAtom> atoms;
  double tail_mass = 0.0;
  int t_max = 0;

  double g(const ReturnAtom& atom) const { return terminals[atom.terminal].bonus - atom.t; }
  double atom_mass() const;
  /// (return, probability) pairs with equal returns merged, sorted by return.
  std::vector<std::pair<double, double>> merged() const;
};

/// E[G] over the atoms; tail mass is excluded (see ReturnDistribution::tail_mass).
double mean(const ReturnDistribution& dist);
/// Pr{G = g}, summing every atom whose return equals g to within 1e-12.
double prob_of_return(const ReturnDistribution& dist, double g);
/// Bound on |E[G] - mean(dist)|: tail * (t_max + max|bonus| + residual_time),
/// where residual_time bounds the expected remaining duration of a path
/// still alive at t_max (e.g. max_s E_s[T]).
double truncation_bound(const ReturnDistribution& dist, double residual_time);

/// Probability-weighted first-passage DP. `p_right`/`p_left` are passed
/// separately so saturated policies keep their tiny complementary mass.
ReturnDistribution gambler_return_dist(const GamblerEnv& env, double p, int t_max);
ReturnDistribution gambler_return_dist(const GamblerEnv& env, double p_right, double p_left,
                                       int t_max);

/// Terminating on `terminal` at step t after standing on the flipped state v1 times.
struct FlippedAtom {
  int terminal = 0;  // index into terminals: 0 -> state 0, 1 -> state L
  int t = 0;
  int visits = 0;
  double prob = 0.0;
};

struct FlippedReturnDistribution {
  std::vector<Terminal> terminals;
  std::vector<FlippedAtom> atoms;
  double tail_mass = 0.0;
  int t_max = 0;

  /// Sum over visit counts, giving the plain (terminal, t) law.
  ReturnDistribution collapse() const;
};

/// Action probabilities on the flipped state (right = sampled +1) and elsewhere.
struct FlippedActionProbs {
  double p1 = 0.5, q1 = 0.5;  // on the flipped state: sampled +1 / -1
  double p2 = 0.5, q2 = 0.5;  // regular states
  static FlippedActionProbs from(double p1, double p2) { return {p1, 1.0 - p1, p2, 1.0 - p2}; }
};

FlippedReturnDistribution flipped_return_detail(const FlippedGamblerEnv& env,
                                                const FlippedActionProbs& probs, int t_max);
ReturnDistribution flipped_return_dist(const FlippedGamblerEnv& env, double p1, double p2, int t_max);

/// DP over the alcove interior; terminal atoms keyed by boundary state.
ReturnDistribution alcove_return_dist(const AlcoveEnv& env, std::span<const double> action_probs,
                                      int t_max);

/// Doubles the horizon from `start` until tail_mass < tolerance (cap 2^20 steps).
template <class Dist>
Dist until_tail_below(double tolerance, const std::function<Dist(int)>& compute, int start = 64) {
  int t = start;
  Dist dist = compute(t);
  while (dist.tail_mass >= tolerance && t < (1 << 20)) {
    t = std::min(2 * t, 1 << 20);
    dist = compute(t);
  }
  return dist;
}

}  // namespace solvable_pg
