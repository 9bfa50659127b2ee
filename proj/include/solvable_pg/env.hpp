#pragma once

#include <span>
#include <string>
#include <vector>

namespace solvable_pg {

/// Random walk on {0..L} absorbed at 0 and L. Every step costs 1; reaching a
/// barrier s adds the bonus lambda_s, so a return is lambda_s - t.
struct GamblerEnv {
  int L = 9;
  int s0 = 3;
  double lambda0 = 0.0;
  double lambdaL = 9.0;

  double bonus(int terminal) const { return terminal == 0 ? lambda0 : lambdaL; }
  /// Mirror image: s -> L - s with the bonuses swapped.
  GamblerEnv reflected() const { return {L, L - s0, lambdaL, lambda0}; }
};

/// Gambler's ruin where the realized move on state 1 is the negation of the
/// sampled action. The agent observes only whether it stands on state 1.
struct FlippedGamblerEnv {
  GamblerEnv base;
  int flipped_state = 1;
};

/// Walk of positive unit steps inside the scaled alcove
///   D = { x : x_0 > x_1 > ... > x_{n-1} > x_0 - m }.
/// Any step onto the boundary H terminates. Boundary facets are indexed
/// 0..n-2 for x_i = x_{i+1} and n-1 for x_0 - x_{n-1} = m.
struct AlcoveEnv {
  int n = 3;
  int m = 6;
  std::vector<int> eta{3, 1, 0};
  /// Terminal bonus per facet; empty means the default (see default_rewards).
  std::vector<double> rewards;

  /// Zero everywhere except the wrap facet x_0 - x_{n-1} = m, which pays m.
  static std::vector<double> default_rewards(int n, int m);

  /// Facet that a boundary state lies on. Throws DimensionMismatch / DomainError.
  int facet_of(std::span<const int> state) const;
  double bonus(std::span<const int> terminal_state) const;
  double facet_bonus(int facet) const;
};

void validate(const GamblerEnv& env);
void validate(const FlippedGamblerEnv& env);
void validate(const AlcoveEnv& env);

bool is_terminal(const GamblerEnv& env, int state);
bool is_terminal(const GamblerEnv& env, std::span<const int> state);
bool is_terminal(const AlcoveEnv& env, std::span<const int> state);

/// Strict interior of the alcove.
bool in_alcove(std::span<const int> x, int m);

/// Alcove with n = 2 equivalent to a gambler env under s = x_0 - x_1.
AlcoveEnv alcove_from_gambler(const GamblerEnv& env);

std::string format_state(std::span<const int> state);

}  // namespace solvable_pg
