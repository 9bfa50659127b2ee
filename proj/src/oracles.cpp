#include "solvable_pg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <tuple>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/valuefn.hpp"

namespace solvable_pg {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Leaf of the action tree: where it ended, and how often each probability symbol fired.
struct LeafKey {
  std::vector<int> state;  // empty while alive at the horizon
  int t = 0;
  int visits = -1;
  std::vector<int> uses;

  auto tie() const { return std::tie(state, t, visits, uses); }
  bool operator<(const LeafKey& o) const { return tie() < o.tie(); }
};

// Walk description: `symbol(state, a)` names the probability used by action a,
// `move(state, a)` applies it, `stop(state)` tests for termination.
template <class Symbol, class Move, class Stop, class Visit>
std::map<LeafKey, BigInt> enumerate_tree(const std::vector<int>& start, int branching, int symbols, int t_max,
                                         Symbol symbol, Move move, Stop stop, Visit visit) {
  if (t_max < 1) throw DomainError("t_max must be >= 1");
  if (std::pow(static_cast<double>(branching), t_max) > kEnumerationLimit) {
    throw TooLarge("enumeration of " + std::to_string(branching) + "^" + std::to_string(t_max) +
                   " action sequences exceeds the 1e8 guard");
  }
  std::map<LeafKey, BigInt> leaves;
  std::vector<int> uses(symbols, 0);
  const bool track = visit(start) >= 0;

  auto rec = [&](auto&& self, const std::vector<int>& x, int t, int visits) -> void {
    const int here = visit(x);
    const int v = track ? visits + here : -1;
    for (int a = 0; a < branching; ++a) {
      const int sym = symbol(x, a);
      if (sym < 0) continue;
      ++uses[sym];
      auto y = move(x, a);
      if (stop(y)) {
        leaves[{y, t + 1, v, uses}] += 1;
      } else if (t + 1 == t_max) {
        leaves[{{}, t + 1, -1, uses}] += 1;
      } else {
        self(self, y, t + 1, v);
      }
      --uses[sym];
    }
  };
  rec(rec, start, 0, 0);
  return leaves;
}

Rational weight(const std::vector<int>& uses, std::span<const Rational> probs) {
  Rational w = 1;
  for (std::size_t i = 0; i < uses.size(); ++i) {
    for (int k = 0; k < uses[i]; ++k) w *= probs[i];
  }
  return w;
}

EnumerationResult collect(const std::map<LeafKey, BigInt>& leaves, std::span<const Rational> probs,
                          const std::function<double(const std::vector<int>&)>& bonus) {
  EnumerationResult out;
  std::map<std::vector<int>, int> index;
  std::map<std::tuple<int, int, int>, Rational> atoms;  // (t, terminal, visits)
  for (const auto& [key, count] : leaves) {
    const Rational mass = Rational(count) * weight(key.uses, probs);
    if (key.state.empty()) {
      out.alive += mass;
      continue;
    }
    auto [it, fresh] = index.try_emplace(key.state, static_cast<int>(out.terminals.size()));
    if (fresh) out.terminals.push_back({key.state, bonus(key.state)});
    atoms[{key.t, it->second, key.visits}] += mass;
  }
  for (const auto& [k, prob] : atoms) {
    if (prob == 0) continue;
    out.atoms.push_back({std::get<1>(k), std::get<0>(k), std::get<2>(k), prob});
  }
  out.covered_mass = out.alive;
  for (const auto& a : out.atoms) out.covered_mass += a.prob;
  return out;
}

void check_rational_prob(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("probability outside [0, 1]");
}

double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> alcove_cdf(const AlcoveEnv& env, std::span<const double> action_probs) {
  if (static_cast<int>(action_probs.size()) != env.n) throw DimensionMismatch("one probability per coordinate required");
  std::vector<double> cdf(action_probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (!(action_probs[i] >= 0.0)) throw DomainError("action probabilities must be >= 0");
    acc += action_probs[i];
    cdf[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-12) throw DomainError("action probabilities must sum to 1");
  cdf.back() = 1.0;
  return cdf;
}

int pick(const std::vector<double>& cdf, double u) {
  const auto i = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
  return static_cast<int>(std::min<std::ptrdiff_t>(i, static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

// Runs `episode(rng) -> (terminal state, t)` in seeded blocks; empty state = truncated.
template <class Episode>
SimulationResult run_blocks(const SimulationOptions& options, const std::function<double(const std::vector<int>&)>& bonus,
                            Episode episode) {
  if (options.episodes < 1) throw DomainError("episodes must be >= 1");
  if (options.block < 1) throw DomainError("block size must be >= 1");
  const std::uint64_t blocks = (options.episodes + options.block - 1) / options.block;
  using Tally = std::map<std::pair<std::vector<int>, int>, std::uint64_t>;
  std::vector<Tally> tallies(blocks);
  std::vector<std::uint64_t> cut(blocks, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(static_cast<std::uint64_t>(b) >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * options.block;
    const std::uint64_t hi = std::min(options.episodes, lo + options.block);
    for (std::uint64_t e = lo; e < hi; ++e) {
      auto [state, t] = episode(rng);
      if (state.empty()) {
        ++cut[b];
      } else {
        ++tallies[b][{std::move(state), t}];
      }
    }
  }

  Tally total;
  SimulationResult out;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (const auto& [k, c] : tallies[b]) total[k] += c;
    out.truncated += cut[b];
  }
  out.episodes = options.episodes;
  out.seed = options.seed;
  out.rng = kRngName;
  std::map<std::vector<int>, int> index;
  for (const auto& [k, c] : total) {
    auto [it, fresh] = index.try_emplace(k.first, static_cast<int>(out.terminals.size()));
    if (fresh) out.terminals.push_back({k.first, bonus(k.first)});
    out.atoms.push_back({it->second, k.second, static_cast<double>(c) / static_cast<double>(options.episodes)});
  }
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const ReturnAtom& a, const ReturnAtom& b) { return std::tie(a.t, a.terminal) < std::tie(b.t, b.terminal); });
  return out;
}

// Thomas elimination on a tridiagonal system; a: sub, b: diag, c: super.
template <class T>
std::vector<T> tridiagonal(std::vector<T> a, std::vector<T> b, std::vector<T> c, std::vector<T> d) {
  const std::size_t n = b.size();
  for (std::size_t i = 1; i < n; ++i) {
    const T w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<T> x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      Rational r(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
      return r;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t decimals = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") throw DomainError("bad number");
    if (digits[0] == '+') digits.erase(0, 1);
    BigInt den = 1;
    for (std::size_t i = 0; i < decimals; ++i) den *= 10;
    return Rational(BigInt(digits), den);
  } catch (const Error&) {
    throw DomainError("cannot parse '" + text + "' as a rational number");
  } catch (const std::exception&) {
    throw DomainError("cannot parse '" + text + "' as a rational number");
  }
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  Rational r(scaled);
  exp -= 53;
  BigInt pow2 = 1;
  pow2 <<= std::abs(exp);
  return exp >= 0 ? r * Rational(pow2) : r / Rational(pow2);
}

ReturnDistribution EnumerationResult::to_distribution() const {
  ReturnDistribution out;
  out.terminals = terminals;
  std::map<std::pair<int, int>, Rational> merged;  // visits summed out
  for (const auto& a : atoms) {
    merged[{a.t, a.terminal}] += a.prob;
    out.t_max = std::max(out.t_max, a.t);
  }
  for (const auto& [k, p] : merged) out.atoms.push_back({k.second, k.first, static_cast<double>(p)});
  out.tail_mass = static_cast<double>(alive);
  return out;
}

EnumerationResult enumerate(const GamblerEnv& env, const Rational& p_right, int t_max) {
  validate(env);
  check_rational_prob(p_right);
  const Rational probs[2] = {p_right, 1 - p_right};
  const auto leaves = enumerate_tree(
      {env.s0}, 2, 2, t_max, [](const std::vector<int>&, int a) { return a; },
      [](const std::vector<int>& x, int a) { return std::vector<int>{x[0] + (a == 0 ? 1 : -1)}; },
      [&](const std::vector<int>& x) { return x[0] == 0 || x[0] == env.L; },
      [](const std::vector<int>&) { return -1; });
  auto out = collect(leaves, probs, [&](const std::vector<int>& s) { return env.bonus(s[0] == 0 ? 0 : 1); });
  for (auto& a : out.atoms) a.terminal = out.terminals[a.terminal].state[0] == 0 ? 0 : 1;
  out.terminals = {{{0}, env.lambda0}, {{env.L}, env.lambdaL}};
  return out;
}

EnumerationResult enumerate(const FlippedGamblerEnv& env, const Rational& p1, const Rational& p2, int t_max) {
  validate(env);
  check_rational_prob(p1);
  check_rational_prob(p2);
  const int f = env.flipped_state;
  const GamblerEnv& base = env.base;
  // symbols: 0 = +1 on flipped, 1 = -1 on flipped, 2 = +1 elsewhere, 3 = -1 elsewhere
  const Rational probs[4] = {p1, 1 - p1, p2, 1 - p2};
  const auto leaves = enumerate_tree(
      {base.s0}, 2, 4, t_max, [&](const std::vector<int>& x, int a) { return (x[0] == f ? 0 : 2) + a; },
      [&](const std::vector<int>& x, int a) {
        int step = a == 0 ? 1 : -1;
        if (x[0] == f) step = -step;
        return std::vector<int>{x[0] + step};
      },
      [&](const std::vector<int>& x) { return x[0] == 0 || x[0] == base.L; },
      [&](const std::vector<int>& x) { return x[0] == f ? 1 : 0; });
  auto out = collect(leaves, probs, [&](const std::vector<int>& s) { return base.bonus(s[0] == 0 ? 0 : 1); });
  for (auto& a : out.atoms) a.terminal = out.terminals[a.terminal].state[0] == 0 ? 0 : 1;
  out.terminals = {{{0}, base.lambda0}, {{base.L}, base.lambdaL}};
  return out;
}

EnumerationResult enumerate(const AlcoveEnv& env, std::span<const Rational> action_probs, int t_max) {
  validate(env);
  if (static_cast<int>(action_probs.size()) != env.n) throw DimensionMismatch("one probability per coordinate required");
  Rational sum = 0;
  for (const auto& p : action_probs) {
    check_rational_prob(p);
    sum += p;
  }
  if (sum != 1) throw DomainError("action probabilities must sum to 1");
  const auto leaves = enumerate_tree(
      env.eta, env.n, env.n, t_max, [&](const std::vector<int>&, int a) { return action_probs[a] == 0 ? -1 : a; },
      [](std::vector<int> x, int a) {
        ++x[a];
        return x;
      },
      [&](const std::vector<int>& x) { return !in_alcove(x, env.m); }, [](const std::vector<int>&) { return -1; });
  return collect(leaves, action_probs, [&](const std::vector<int>& s) { return env.bonus(s); });
}

ReturnDistribution SimulationResult::to_distribution() const {
  ReturnDistribution out;
  out.terminals = terminals;
  out.atoms = atoms;
  for (const auto& a : atoms) out.t_max = std::max(out.t_max, a.t);
  out.tail_mass = episodes ? static_cast<double>(truncated) / static_cast<double>(episodes) : 0.0;
  return out;
}

SimulationResult simulate(const GamblerEnv& env, double p_right, const SimulationOptions& options) {
  validate(env);
  if (!(p_right >= 0.0 && p_right <= 1.0)) throw DomainError("p must lie in [0, 1]");
  auto bonus = [&](const std::vector<int>& s) { return env.bonus(s[0] == 0 ? 0 : 1); };
  return run_blocks(options, bonus, [&](std::mt19937_64& rng) -> std::pair<std::vector<int>, int> {
    int s = env.s0;
    for (int t = 1; t <= options.max_steps; ++t) {
      s += uniform53(rng) < p_right ? 1 : -1;
      if (s == 0 || s == env.L) return {{s}, t};
    }
    return {{}, options.max_steps};
  });
}

SimulationResult simulate(const FlippedGamblerEnv& env, double p1, double p2, const SimulationOptions& options) {
  validate(env);
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) throw DomainError("probabilities must lie in [0, 1]");
  const GamblerEnv& base = env.base;
  auto bonus = [&](const std::vector<int>& s) { return base.bonus(s[0] == 0 ? 0 : 1); };
  return run_blocks(options, bonus, [&](std::mt19937_64& rng) -> std::pair<std::vector<int>, int> {
    int s = base.s0;
    for (int t = 1; t <= options.max_steps; ++t) {
      const bool flipped = s == env.flipped_state;
      int step = uniform53(rng) < (flipped ? p1 : p2) ? 1 : -1;
      s += flipped ? -step : step;
      if (s == 0 || s == base.L) return {{s}, t};
    }
    return {{}, options.max_steps};
  });
}

SimulationResult simulate(const AlcoveEnv& env, std::span<const double> action_probs, const SimulationOptions& options) {
  validate(env);
  const auto cdf = alcove_cdf(env, action_probs);
  auto bonus = [&](const std::vector<int>& s) { return env.bonus(s); };
  return run_blocks(options, bonus, [&](std::mt19937_64& rng) -> std::pair<std::vector<int>, int> {
    std::vector<int> x = env.eta;
    for (int t = 1; t <= options.max_steps; ++t) {
      ++x[pick(cdf, uniform53(rng))];
      if (!in_alcove(x, env.m)) return {x, t};
    }
    return {{}, options.max_steps};
  });
}

std::vector<std::vector<int>> sample_trajectory(const AlcoveEnv& env, std::span<const double> action_probs,
                                                std::uint64_t seed, int max_steps) {
  validate(env);
  const auto cdf = alcove_cdf(env, action_probs);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0u, 0u};
  std::mt19937_64 rng(seq);
  std::vector<std::vector<int>> path{env.eta};
  for (int t = 1; t <= max_steps; ++t) {
    auto x = path.back();
    ++x[pick(cdf, uniform53(rng))];
    path.push_back(x);
    if (!in_alcove(x, env.m)) break;
  }
  return path;
}

double tvd(const ReturnDistribution& a, const ReturnDistribution& b) {
  std::map<std::pair<std::vector<int>, int>, double> diff;
  for (const auto& x : a.atoms) diff[{a.terminals[x.terminal].state, x.t}] += x.prob;
  for (const auto& x : b.atoms) diff[{b.terminals[x.terminal].state, x.t}] -= x.prob;
  double total = std::abs(a.tail_mass - b.tail_mass);
  for (const auto& [k, d] : diff) total += std::abs(d);
  return 0.5 * total;
}

HittingSolution hitting_solve(const GamblerEnv& env, double p) {
  validate(env);
  if (!(p > 0.0 && p < 1.0)) throw DomainError("hitting_solve needs 0 < p < 1");
  const int n = env.L - 1;
  const double q = 1.0 - p;
  // x_s - p x_{s+1} - q x_{s-1} = rhs, unknowns s = 1..L-1
  std::vector<double> sub(n, -q), diag(n, 1.0), sup(n, -p);
  std::vector<double> time_rhs(n, 1.0), hit_rhs(n, 0.0);
  hit_rhs[n - 1] = p;
  const auto time = tridiagonal(sub, diag, sup, time_rhs);
  const auto hit = tridiagonal(sub, diag, sup, hit_rhs);
  HittingSolution out;
  out.expected_time = time[env.s0 - 1];
  out.prob_right = hit[env.s0 - 1];
  out.value = out.prob_right * env.lambdaL + (1.0 - out.prob_right) * env.lambda0 - out.expected_time;
  return out;
}

ExactValue exact_value(const GamblerEnv& env, const Rational& p) {
  validate(env);
  if (p <= 0 || p >= 1) throw DomainError("exact_value needs 0 < p < 1");
  const int n = env.L - 1;
  const Rational q = 1 - p;
  const Rational l0 = to_rational(env.lambda0), lL = to_rational(env.lambdaL);
  // v_s = p v_{s+1} + q v_{s-1} - 1 with v_0 = l0, v_L = lL
  std::vector<Rational> sub(n, -q), diag(n, Rational(1)), sup(n, -p), rhs(n, Rational(-1));
  rhs[0] += q * l0;
  rhs[n - 1] += p * lL;
  const auto v = tridiagonal(sub, diag, sup, rhs);
  auto at = [&](int s) { return s == 0 ? l0 : s == env.L ? lL : v[s - 1]; };
  // differentiate in p: v'_s - p v'_{s+1} - q v'_{s-1} = v_{s+1} - v_{s-1}, v' = 0 at the barriers
  std::vector<Rational> drhs(n);
  for (int s = 1; s <= n; ++s) drhs[s - 1] = at(s + 1) - at(s - 1);
  const auto dv = tridiagonal(sub, diag, sup, drhs);
  return {v[env.s0 - 1], dv[env.s0 - 1]};
}

}  // namespace solvable_pg
