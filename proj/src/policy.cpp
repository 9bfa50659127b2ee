#include "solvable_pg/policy.hpp"

#include <algorithm>
#include <cmath>

#include "solvable_pg/errors.hpp"

namespace solvable_pg {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool close(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
  }
  return true;
}

}  // namespace

void BoltzmannPolicy1D::check() const {
  if (!(tau > 0.0)) throw DomainError("temperature tau must be > 0");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

// (1 + tanh(x)) / 2 = sigmoid(2x); the complementary mass uses sigmoid(-2x).
double BoltzmannPolicy1D::prob_plus() const {
  return (1.0 - epsilon) * sigmoid(2.0 * theta / tau) + 0.5 * epsilon;
}

double BoltzmannPolicy1D::prob_minus() const {
  return (1.0 - epsilon) * sigmoid(-2.0 * theta / tau) + 0.5 * epsilon;
}

double BoltzmannPolicy1D::dprob() const {
  const double z = 2.0 * theta / tau;
  return (1.0 - epsilon) * (2.0 / tau) * sigmoid(z) * sigmoid(-z);
}

double BoltzmannPolicy1D::log_grad(int action) const {
  const double z = 2.0 * theta / tau;
  if (epsilon == 0.0) {
    return action > 0 ? (2.0 / tau) * sigmoid(-z) : -(2.0 / tau) * sigmoid(z);
  }
  return action > 0 ? dprob() / prob_plus() : -dprob() / prob_minus();
}

double BoltzmannPolicy1D::theta_for(double pi, double tau, double epsilon) {
  const double s = (pi - 0.5 * epsilon) / (1.0 - epsilon);
  if (!(s > 0.0 && s < 1.0)) throw DomainError("target probability outside the policy's range");
  return 0.5 * tau * std::log(s / (1.0 - s));
}

FlippedActionProbs TwoParamPolicy::action_probs() const {
  const auto f = flipped();
  const auto r = regular();
  return {f.prob_plus(), f.prob_minus(), r.prob_plus(), r.prob_minus()};
}

double GradientDistribution::atom_mass() const {
  double total = 0.0;
  for (const auto& a : atoms) total += a.prob;
  return total;
}

std::vector<double> GradientDistribution::mean() const {
  std::vector<double> out(static_cast<std::size_t>(dim()), 0.0);
  for (const auto& a : atoms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a.prob * a.grad[i];
  }
  return out;
}

GradientDistribution merge_atoms(std::vector<GradientAtom> atoms, double tail_mass) {
  std::sort(atoms.begin(), atoms.end(),
            [](const GradientAtom& a, const GradientAtom& b) { return a.grad < b.grad; });
  GradientDistribution out;
  out.tail_mass = tail_mass;
  for (auto& a : atoms) {
    if (!out.atoms.empty() && close(out.atoms.back().grad, a.grad)) {
      out.atoms.back().prob += a.prob;
    } else {
      out.atoms.push_back(std::move(a));
    }
  }
  return out;
}

GradientDistribution gradient_dist_1d(const GamblerEnv& env, const BoltzmannPolicy1D& policy,
                                      int t_max) {
  policy.check();
  return gradient_dist_1d(env, policy,
                          gambler_return_dist(env, policy.prob_plus(), policy.prob_minus(), t_max));
}

GradientDistribution gradient_dist_1d(const GamblerEnv& env, const BoltzmannPolicy1D& policy,
                                      const ReturnDistribution& returns) {
  policy.check();
  const double up = policy.log_grad(+1);
  const double down = policy.log_grad(-1);
  std::vector<GradientAtom> atoms;
  atoms.reserve(returns.atoms.size());
  for (const auto& a : returns.atoms) {
    const int state = returns.terminals[a.terminal].state[0];
    const int right = (state - env.s0 + a.t) / 2;
    const int left = a.t - right;
    const double g = returns.g(a);
    atoms.push_back({{(left * down + right * up) * g}, a.prob});
  }
  return merge_atoms(std::move(atoms), returns.tail_mass);
}

GradientDistribution gradient_dist_flipped(const FlippedGamblerEnv& env, const TwoParamPolicy& policy,
                                           int t_max) {
  const auto f = policy.flipped();
  const auto r = policy.regular();
  f.check();
  r.check();
  const auto detail = flipped_return_detail(env, policy.action_probs(), t_max);
  const double f_up = f.log_grad(+1), f_down = f.log_grad(-1);
  const double r_up = r.log_grad(+1), r_down = r.log_grad(-1);
  std::vector<GradientAtom> atoms;
  atoms.reserve(detail.atoms.size());
  for (const auto& a : detail.atoms) {
    const bool at_zero = a.terminal == 0;
    const int state = at_zero ? 0 : env.base.L;
    const int right = (state - env.base.s0 + a.t) / 2;
    const int left = a.t - right;
    // moves made from the flipped state: a realized left is a sampled +1
    const int left_from_flip = at_zero ? 1 : 0;
    const int right_from_flip = a.visits - left_from_flip;
    const int n_plus_f = left_from_flip, n_minus_f = right_from_flip;
    const int n_plus_r = right - right_from_flip, n_minus_r = left - left_from_flip;
    const double g = detail.terminals[a.terminal].bonus - a.t;
    atoms.push_back({{(n_minus_f * f_down + n_plus_f * f_up) * g, (n_minus_r * r_down + n_plus_r * r_up) * g},
                     a.prob});
  }
  return merge_atoms(std::move(atoms), detail.tail_mass);
}

}  // namespace solvable_pg
