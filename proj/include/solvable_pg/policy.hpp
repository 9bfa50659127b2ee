#pragma once

#include <vector>

#include "solvable_pg/env.hpp"
#include "solvable_pg/retdist.hpp"

namespace solvable_pg {

/// pi(+1 | theta) = (1 - eps) * (1 + tanh(theta / tau)) / 2 + eps / 2.
struct BoltzmannPolicy1D {
  double theta = 0.0;
  double tau = 1.0;
  double epsilon = 0.0;

  /// Throws DomainError unless tau > 0 and 0 <= epsilon < 1.
  void check() const;
  double prob_plus() const;
  /// 1 - prob_plus(), computed without cancellation.
  double prob_minus() const;
  double action_prob(int action) const { return action > 0 ? prob_plus() : prob_minus(); }
  /// d pi(+1) / d theta.
  double dprob() const;
  /// d log pi(action) / d theta.
  double log_grad(int action) const;
  /// theta at which prob_plus() equals `pi` (0 < pi < 1 within the eps floor).
  static double theta_for(double pi, double tau = 1.0, double epsilon = 0.0);
};

/// One parameter for the flipped-state observation, one for all other states.
struct TwoParamPolicy {
  double theta_f = 0.0;
  double theta_r = 0.0;
  double tau = 1.0;
  double epsilon = 0.0;

  BoltzmannPolicy1D flipped() const { return {theta_f, tau, epsilon}; }
  BoltzmannPolicy1D regular() const { return {theta_r, tau, epsilon}; }
  FlippedActionProbs action_probs() const;
};

struct GradientAtom {
  std::vector<double> grad;
  double prob = 0.0;
};

/// Law of the single-episode REINFORCE estimate (sum_t grad log pi(a_t)) * G.
struct GradientDistribution {
  std::vector<GradientAtom> atoms;
  double tail_mass = 0.0;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().grad.size()); }
  double atom_mass() const;
  /// E over atoms, per component; the tail is excluded.
  std::vector<double> mean() const;
};

GradientDistribution gradient_dist_1d(const GamblerEnv& env, const BoltzmannPolicy1D& policy,
                                      int t_max);

/// Same as gradient_dist_1d but reuses an already computed return law.
GradientDistribution gradient_dist_1d(const GamblerEnv& env, const BoltzmannPolicy1D& policy,
                                      const ReturnDistribution& returns);

/// Two-component gradients (theta_f, theta_r). Log-gradients use the sampled
/// action; the dynamics use the realized move.
GradientDistribution gradient_dist_flipped(const FlippedGamblerEnv& env, const TwoParamPolicy& policy,
                                           int t_max);

/// Merge atoms whose gradients agree within 1e-12 (relative to max(1, |g|)).
GradientDistribution merge_atoms(std::vector<GradientAtom> atoms, double tail_mass);

}  // namespace solvable_pg
