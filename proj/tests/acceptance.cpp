#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "solvable_pg/errors.hpp"
#include "solvable_pg/kernels.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/paramchain.hpp"
#include "solvable_pg/pathcount.hpp"
#include "solvable_pg/policy.hpp"
#include "solvable_pg/retdist.hpp"
#include "solvable_pg/valuefn.hpp"

using namespace solvable_pg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Collects sub-checks of one criterion; the criterion passes only if all do.
class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {}

  bool check(bool ok, const std::string& what) {
    lines_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + what);
    pass_ &= ok;
    return ok;
  }

  bool report() const {
    std::printf("%s %s\n", pass_ ? "PASS" : "FAIL", name_.c_str());
    for (const auto& l : lines_) std::printf("%s\n", l.c_str());
    std::fflush(stdout);
    return pass_;
  }

 private:
  std::string name_;
  std::vector<std::string> lines_;
  bool pass_ = true;
};

const GamblerEnv kRuin9{9, 3, 0.0, 9.0};

using AtomKey = std::tuple<std::vector<int>, int>;

std::map<AtomKey, double> keyed(const ReturnDistribution& d) {
  std::map<AtomKey, double> out;
  for (const auto& a : d.atoms) out[{d.terminals[a.terminal].state, a.t}] += a.prob;
  return out;
}

/// Largest per-atom gap, keyed by (terminal state, t).
double atom_gap(const ReturnDistribution& a, const ReturnDistribution& b) {
  auto ka = keyed(a), kb = keyed(b);
  double gap = std::abs(a.tail_mass - b.tail_mass);
  for (const auto& [k, p] : ka) gap = std::max(gap, std::abs(p - (kb.count(k) ? kb[k] : 0.0)));
  for (const auto& [k, p] : kb) gap = std::max(gap, std::abs(p - (ka.count(k) ? ka[k] : 0.0)));
  return gap;
}

ReturnDistribution converged(const GamblerEnv& env, double p) {
  return until_tail_below<ReturnDistribution>(1e-14, [&](int t) { return gambler_return_dist(env, p, t); });
}

bool route_equality() {
  Criterion c("route equality: binomial = trig = DP first-passage counts (L <= 12, t <= 64)");
  const auto t0 = Clock::now();
  long queries = 0, mismatches = 0, nonzero = 0;
  for (int L = 2; L <= 12; ++L) {
    for (int s0 = 1; s0 < L; ++s0) {
      const auto dp = alive_counts_dp(GamblerEnv{L, s0, 0.0, static_cast<double>(L)}, 64);
      for (int t = 1; t <= 64; ++t) {
        for (int terminal : {0, L}) {
          const PathCountQuery q{s0, L, t, terminal};
          const BigInt b = count_binomial(q);
          const BigInt tr = count_trig<Float50>(q);
          ++queries;
          if (b != 0) ++nonzero;
          if (b != tr || b != dp[t][terminal]) ++mismatches;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  c.check(mismatches == 0, fmt("%ld queries (%ld nonzero), %ld mismatches", queries, nonzero, mismatches));
  c.check(secs < 30.0, fmt("runtime %.2f s < 30 s", secs));
  return c.report();
}

bool brute_force() {
  Criterion c("brute-force equivalence: DP laws vs exhaustive enumeration within 1e-12 per atom");
  const auto t0 = Clock::now();
  const int t_max = 14;
  double worst_g = 0.0, worst_f = 0.0, worst_a = 0.0;
  int cases = 0;
  for (int L = 2; L <= 5; ++L) {
    for (int s0 = 1; s0 < L; ++s0) {
      const GamblerEnv env{L, s0, 0.0, static_cast<double>(L)};
      for (const char* p : {"1/2", "3/10", "17/20"}) {
        const Rational q = parse_rational(p);
        const auto exact = enumerate(env, q, t_max).to_distribution();
        worst_g = std::max(worst_g, atom_gap(gambler_return_dist(env, static_cast<double>(q), t_max), exact));
        ++cases;
      }
      for (auto [p1, p2] : {std::pair{"1/2", "1/2"}, std::pair{"1/5", "7/10"}, std::pair{"9/10", "1/3"}}) {
        const FlippedGamblerEnv fenv{env, 1};
        const Rational q1 = parse_rational(p1), q2 = parse_rational(p2);
        const auto exact = enumerate(fenv, q1, q2, t_max).to_distribution();
        const auto got = flipped_return_dist(fenv, static_cast<double>(q1), static_cast<double>(q2), t_max);
        worst_f = std::max(worst_f, atom_gap(got, exact));
        ++cases;
      }
    }
  }
  for (int n = 2; n <= 3; ++n) {
    for (int m = n; m <= 5; ++m) {
      std::vector<int> eta(n);
      for (int i = 0; i < n; ++i) eta[i] = n - 1 - i;
      eta[0] = m - 1;
      if (n == 2) eta = {1, 0};
      const AlcoveEnv env{n, m, eta, {}};
      std::vector<Rational> probs;
      std::vector<double> dprobs;
      for (int i = 0; i < n; ++i) probs.push_back(Rational(i + 1, n * (n + 1) / 2));
      for (const auto& r : probs) dprobs.push_back(static_cast<double>(r));
      const auto exact = enumerate(env, probs, t_max).to_distribution();
      worst_a = std::max(worst_a, atom_gap(alcove_return_dist(env, dprobs, t_max), exact));
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  c.check(worst_g < 1e-12, fmt("gambler max atom gap %.2e", worst_g));
  c.check(worst_f < 1e-12, fmt("flipped max atom gap %.2e", worst_f));
  c.check(worst_a < 1e-12, fmt("alcove max atom gap %.2e", worst_a));
  c.check(secs < 120.0, fmt("%d cases, runtime %.2f s < 120 s", cases, secs));
  return c.report();
}

bool value_cross_checks() {
  Criterion c("value cross-checks: Chebyshev vs elimination, -15 oracle, mean vs tail bound");
  double worst = 0.0;
  for (int L = 2; L <= 40; ++L)
    for (int s0 = 1; s0 < L; ++s0)
      for (int i = 1; i < 40; ++i) {
        const double p = i / 40.0;
        const GamblerEnv env{L, s0, 0.0, static_cast<double>(L)};
        const double a = value_chebyshev(env, p), b = value_linear_solve(env, p);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
  c.check(worst < 1e-10, fmt("max relative gap %.2e over L <= 40, p = i/40", worst));

  const double v = value_chebyshev(kRuin9, 0.5);
  const auto h = hitting_solve(kRuin9, 0.5);
  c.check(std::abs(v + 15.0) < 1e-9 && std::abs(h.value + 15.0) < 1e-9,
          fmt("v = %.15g, hitting_solve = %.15g (target -15)", v, h.value));

  double worst_excess = -1.0;
  for (double p : {0.3, 0.5, 0.7}) {
    const auto d = converged(kRuin9, p);
    const double bound = truncation_bound(d, max_expected_duration(kRuin9, p));
    worst_excess = std::max(worst_excess, std::abs(mean(d) - value_linear_solve(kRuin9, p)) - bound - 1e-12);
  }
  c.check(worst_excess <= 0.0, "distribution mean within the tail bound (p = 0.3, 0.5, 0.7)");
  return c.report();
}

bool gradient_consistency() {
  Criterion c("gradient consistency: E[gradient] = d/dtheta v on 25 points of [-3, 3]");
  const auto t0 = Clock::now();
  double worst_rel = 0.0, worst_abs = 0.0;
  bool ok = true;
  for (int i = 0; i < 25; ++i) {
    const double theta = -3.0 + 0.25 * i;
    const BoltzmannPolicy1D pol{theta, 1.0, 0.0};
    const auto returns = converged(kRuin9, pol.prob_plus());
    const auto g = gradient_dist_1d(kRuin9, pol, returns);
    auto v = [&](double th) { return value_linear_solve(kRuin9, BoltzmannPolicy1D{th, 1.0, 0.0}.prob_plus()); };
    const double h = 1e-3;
    const double d1 = (v(theta + h) - v(theta - h)) / (2 * h);
    const double d2 = (v(theta + h / 2) - v(theta - h / 2)) / h;
    const double fd = (4 * d2 - d1) / 3;
    double max_grad = 0.0;
    for (const auto& a : g.atoms) max_grad = std::max(max_grad, std::abs(a.grad[0]));
    const double tail = g.tail_mass * max_grad + 1e-9;
    const double err = std::abs(g.mean()[0] - fd);
    worst_abs = std::max(worst_abs, err);
    if (std::abs(fd) > 1e-6) worst_rel = std::max(worst_rel, err / std::abs(fd));
    ok &= err <= 1e-4 * std::abs(fd) + tail;
  }
  const double secs = seconds_since(t0);
  c.check(ok, fmt("max relative gap %.2e, max absolute gap %.2e (tolerance 1e-4 relative + tail bound)", worst_rel,
                  worst_abs));
  c.check(secs < 60.0, fmt("runtime %.2f s < 60 s", secs));
  return c.report();
}

bool fig2_sign() {
  Criterion c("value slope sign: dv/dp < 0 at p = 1/2 for s0 = 1, 2, 3 (exact)");
  for (int s0 = 1; s0 <= 3; ++s0) {
    GamblerEnv env = kRuin9;
    env.s0 = s0;
    const Rational slope = exact_value(env, Rational(1, 2)).slope;
    c.check(slope < 0, fmt("s0 = %d: dv/dp = %s", s0, slope.str().c_str()));
  }
  return c.report();
}

bool kernel_suite() {
  Criterion c("kernel suite: identity, stochastic rows, absorption, 3-bin oracle, grid stability, sweep runtime");
  const PolicyFamily family;
  const auto table = tabulate_gradients(kRuin9, family, GridSpec{});

  const auto id = build_kernel(table, KernelOptions{0.0});
  double off_diag = 0.0, diag_err = 0.0;
  for (int r = 0; r < id.rows.rows; ++r) {
    for (int j = id.rows.row_ptr[r]; j < id.rows.row_ptr[r + 1]; ++j)
      if (id.rows.col[j] != r) off_diag += id.rows.val[j];
    diag_err = std::max(diag_err, std::abs(id.self_prob(r) - 1.0));
  }
  c.check(off_diag == 0.0 && diag_err <= 1e-12,
          fmt("alpha = 0: off-diagonal mass %.1e, max |diagonal - 1| %.2e", off_diag, diag_err));

  const auto k = build_kernel(table, KernelOptions{2e-4});
  c.check(k.max_row_error() <= 1e-12, fmt("alpha = 2e-4: max |row sum - 1| = %.2e", k.max_row_error()));

  const auto big = build_kernel(table, KernelOptions{1e-3, false});
  const auto absorbed = absorption_probs(big);
  double abs_err = 0.0;
  for (std::size_t b = 0; b < absorbed.to_optimal.size(); ++b)
    abs_err = std::max(abs_err, std::abs(absorbed.to_optimal[b] + absorbed.to_pessimal[b] - 1.0));
  c.check(abs_err <= 1e-9, fmt("alpha = 1e-3: absorption rows sum to 1 within %.2e", abs_err));

  const GridSpec three{-1.5, 1.5, 3, 1};
  const auto toy = absorption_probs(kernel_from_rows(three, {{{0, 1.0}}, {{0, 0.2}, {1, 0.5}, {2, 0.3}}, {{2, 1.0}}}));
  c.check(std::abs(toy.to_optimal[1] - 0.6) <= 4 * std::numeric_limits<double>::epsilon(),
          fmt("3-bin chain: P(optimal | middle) = %.17g (0.6)", toy.to_optimal[1]));

  GridSpec coarse;
  coarse.bins = 512;
  const auto coarse_abs = absorption_probs(
      build_kernel(tabulate_gradients(kRuin9, family, coarse), KernelOptions{1e-3, false}));
  double gap = 0.0, gap_pi = 0.0;
  for (int i = 1; i <= 99; ++i) {
    const double pi = i / 100.0;
    const double th = BoltzmannPolicy1D::theta_for(pi);
    const double d = std::abs(absorbed.to_optimal[GridSpec{}.bin_of(th)] - coarse_abs.to_optimal[coarse.bin_of(th)]);
    if (d > gap) gap = d, gap_pi = pi;
  }
  c.check(gap <= 1e-8, fmt("512 vs 1024 bins at alpha = 1e-3: max gap %.3e at pi_init = %.2f", gap, gap_pi));

  const auto t0 = Clock::now();
  const auto alphas = log_grid(1e-5, 10.0, 64);
  std::vector<double> pis;
  for (int i = 1; i <= 99; ++i) pis.push_back(i / 100.0);
  std::size_t rows = 0;
  for (int s0 : {1, 3, 5}) {
    GamblerEnv env = kRuin9;
    env.s0 = s0;
    rows += convergence_sweep(tabulate_gradients(env, family, GridSpec{}), family, alphas, pis).size();
  }
  const double secs = seconds_since(t0);
  c.check(rows == 3 * 64 * 99 && secs < 1800.0, fmt("step-size sweep: %zu rows in %.1f s < 1800 s", rows, secs));
  return c.report();
}

struct Fig1Run {
  double high = 0.0, low = 0.0, middle = 0.0;  // theta > 1 / theta < -1 / |theta| < 0.5 at the last step
  double left = 0.0, right = 0.0;              // theta < -0.5 / theta > 0.5
  int escape = -1;                             // first step with P(|theta| > 1) > 0.5
};

Fig1Run summarize_run(const GridSpec& grid, const std::function<void(const EvolveObserver&)>& run, int steps) {
  Fig1Run r;
  run([&](int it, std::span<const double> d) {
    double out = 0.0;
    for (int b = 0; b < grid.bins; ++b)
      if (std::abs(grid.mid(b)) > 1.0) out += d[b];
    if (r.escape < 0 && out > 0.5) r.escape = it;
    if (it != steps) return;
    for (int b = 0; b < grid.bins; ++b) {
      const double th = grid.mid(b);
      if (th > 1.0) r.high += d[b];
      if (th < -1.0) r.low += d[b];
      if (std::abs(th) < 0.5) r.middle += d[b];
      if (th > 0.5) r.right += d[b];
      if (th < -0.5) r.left += d[b];
    }
  });
  return r;
}

bool fig1() {
  Criterion c("evolution shape: bimodal at 800, pi_init 0.56 beats 0.5, momentum escapes sooner");
  const int steps = 800;
  const double alpha = 2e-4;
  const PolicyFamily family;
  const GridSpec grid;
  const auto table = tabulate_gradients(kRuin9, family, grid);
  const auto k = build_kernel(table, KernelOptions{alpha});
  auto sga = [&](double pi) {
    return summarize_run(
        grid, [&](const EvolveObserver& obs) { evolve(k.rows, point_mass(grid, BoltzmannPolicy1D::theta_for(pi)), steps, obs); },
        steps);
  };
  const auto a = sga(0.5), b = sga(0.56);
  const auto mk = build_momentum_kernel(table, VelocityGrid{}, MomentumOptions{alpha, 0.2});
  const auto m = summarize_run(
      grid,
      [&](const EvolveObserver& obs) {
        evolve(mk.rows, momentum_point_mass(mk, 0.0), steps,
               [&](int it, std::span<const double> d) { obs(it, theta_marginal(mk, d)); });
      },
      steps);

  for (auto [name, r] : {std::pair{"pi_init 0.5", a}, std::pair{"pi_init 0.56", b}}) {
    c.check(r.left >= 1e-2 && r.right >= 1e-2 && r.middle <= 1e-3,
            fmt("%s bimodal: P(theta<-0.5) = %.4f, P(theta>0.5) = %.4f, P(|theta|<0.5) = %.2e", name, r.left, r.right,
                r.middle));
  }
  c.check(b.high > a.high, fmt("P(theta > 1) at 800: %.4f (0.56) > %.4f (0.5)", b.high, a.high));
  c.check(m.escape >= 0 && (a.escape < 0 || m.escape < a.escape),
          fmt("escape iteration: momentum %d < SGA %d", m.escape, a.escape));
  return c.report();
}

bool monte_carlo() {
  Criterion c("Monte Carlo: TVD < 5e-3 at 1e6 episodes; seeded runs byte-identical");
  SimulationOptions o;
  o.episodes = 1'000'000;
  o.seed = 20240601;

  const auto exact_g = converged(kRuin9, 0.5);
  const auto sim_g = simulate(kRuin9, 0.5, o);
  const double tg = tvd(sim_g.to_distribution(), exact_g);
  c.check(tg < 5e-3, fmt("gambler L = 9, p = 0.5: TVD %.2e", tg));

  const AlcoveEnv alcove{3, 6, {3, 1, 0}, {}};
  const std::vector<double> probs(3, 1.0 / 3);
  const auto exact_a = until_tail_below<ReturnDistribution>(
      1e-14, [&](int t) { return alcove_return_dist(alcove, probs, t); });
  const auto sim_a = simulate(alcove, probs, o);
  const double ta = tvd(sim_a.to_distribution(), exact_a);
  c.check(ta < 5e-3, fmt("alcove D^3_6 from (3,1,0), uniform: TVD %.2e", ta));

  auto bytes = [](const SimulationResult& r) {
    std::ostringstream s;
    s.precision(17);
    for (const auto& a : r.atoms) s << a.terminal << ',' << a.t << ',' << a.prob << '\n';
    return s.str();
  };
  set_threads(1);
  const auto one = simulate(kRuin9, 0.5, o);
  set_threads(0);
  c.check(bytes(one) == bytes(sim_g), "gambler rerun identical (1 thread vs default)");
  c.check(bytes(simulate(alcove, probs, o)) == bytes(sim_a), "alcove rerun identical");
  return c.report();
}

bool flipped_reduction() {
  Criterion c("flipped reduction: p1 = 1 - p2 equals the plain walk atom for atom within 1e-12");
  double worst = 0.0;
  bool same_support = true;
  for (double p : {0.1, 0.35, 0.5, 0.8}) {
    for (int s0 = 1; s0 < kRuin9.L; ++s0) {
      GamblerEnv env = kRuin9;
      env.s0 = s0;
      const auto plain = gambler_return_dist(env, p, 400);
      const auto flipped = flipped_return_dist(FlippedGamblerEnv{env, 1}, 1.0 - p, p, 400);
      if (plain.atoms.size() != flipped.atoms.size()) {
        same_support = false;
        continue;
      }
      for (std::size_t i = 0; i < plain.atoms.size(); ++i) {
        same_support &= plain.atoms[i].t == flipped.atoms[i].t && plain.atoms[i].terminal == flipped.atoms[i].terminal;
        worst = std::max(worst, std::abs(plain.atoms[i].prob - flipped.atoms[i].prob));
      }
      worst = std::max(worst, std::abs(plain.tail_mass - flipped.tail_mass));
    }
  }
  c.check(same_support, "identical atom keys");
  c.check(worst <= 1e-12, fmt("max atom gap %.2e", worst));
  return c.report();
}

}  // namespace

int main() {
  int failed = 0;
  const std::vector<std::function<bool()>> criteria{route_equality, brute_force,  value_cross_checks,
                                                    gradient_consistency, fig2_sign, kernel_suite,
                                                    fig1,           monte_carlo,  flipped_reduction};
  for (const auto& run : criteria) {
    try {
      failed += run() ? 0 : 1;
    } catch (const std::exception& e) {
      std::printf("FAIL (exception) %s\n", e.what());
      ++failed;
    }
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
