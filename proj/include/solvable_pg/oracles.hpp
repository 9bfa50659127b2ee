#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "solvable_pg/env.hpp"
#include "solvable_pg/retdist.hpp"

namespace solvable_pg {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "a/b", an integer, or a decimal literal ("0.3" -> 3/10) exactly.
Rational parse_rational(const std::string& text);
/// Exact binary value of a double.
Rational to_rational(double x);

struct EnumAtom {
  int terminal = 0;
  int t = 0;
  int visits = -1;  // flipped-state visits; -1 where not tracked
  Rational prob;
};

/// Exact law over all action sequences up to t_max.
struct EnumerationResult {
  std::vector<Terminal> terminals;
  std::vector<EnumAtom> atoms;
  Rational alive;          // mass still inside at t_max
  Rational covered_mass;   // atoms + alive; exactly 1 by construction

  ReturnDistribution to_distribution() const;
};

/// Guard: branching^t_max must not exceed this (TooLarge otherwise).
inline constexpr double kEnumerationLimit = 1e8;

EnumerationResult enumerate(const GamblerEnv& env, const Rational& p_right, int t_max);
/// Sampled-action semantics: p1 on the flipped state, p2 elsewhere.
EnumerationResult enumerate(const FlippedGamblerEnv& env, const Rational& p1, const Rational& p2, int t_max);
EnumerationResult enumerate(const AlcoveEnv& env, std::span<const Rational> action_probs, int t_max);

/// Empirical episode law. Terminals are listed in order of first appearance.
struct SimulationResult {
  std::vector<Terminal> terminals;
  std::vector<ReturnAtom> atoms;  // prob = frequency
  std::uint64_t episodes = 0;
  std::uint64_t truncated = 0;    // episodes cut at max_steps
  std::uint64_t seed = 0;
  std::string rng;

  ReturnDistribution to_distribution() const;
};

struct SimulationOptions {
  std::uint64_t episodes = 1'000'000;
  std::uint64_t seed = 0;
  int max_steps = 1 << 20;
  std::uint64_t block = 1 << 16;  // episodes per independently seeded block
};

/// Name of the generator recorded in outputs.
inline constexpr const char* kRngName = "mt19937_64/seed_seq(seed_lo,seed_hi,block)/53bit";

SimulationResult simulate(const GamblerEnv& env, double p_right, const SimulationOptions& options);
SimulationResult simulate(const FlippedGamblerEnv& env, double p1, double p2, const SimulationOptions& options);
SimulationResult simulate(const AlcoveEnv& env, std::span<const double> action_probs,
                          const SimulationOptions& options);

/// One episode's visited states, start included; the last state is terminal
/// unless max_steps was hit. Uses the same generator as simulate (block 0).
std::vector<std::vector<int>> sample_trajectory(const AlcoveEnv& env, std::span<const double> action_probs,
                                                std::uint64_t seed, int max_steps = 1 << 20);

/// Total variation distance between two laws keyed by (terminal state, t);
/// tail masses count as one extra atom each.
double tvd(const ReturnDistribution& a, const ReturnDistribution& b);

struct HittingSolution {
  double expected_time = 0.0;
  double prob_right = 0.0;
  double value = 0.0;
};

/// Solves the absorbing-chain systems for E[T] and P(hit L) from s0.
HittingSolution hitting_solve(const GamblerEnv& env, double p);

/// v(s0) and dv/dp in exact rational arithmetic (bonuses taken as exact binaries).
struct ExactValue {
  Rational value;
  Rational slope;
};
ExactValue exact_value(const GamblerEnv& env, const Rational& p);

}  // namespace solvable_pg
