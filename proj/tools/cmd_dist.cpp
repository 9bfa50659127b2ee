#include <iostream>

#include "cli_common.hpp"
#include "solvable_pg/errors.hpp"
#include "solvable_pg/pathcount.hpp"
#include "solvable_pg/policy.hpp"
#include "solvable_pg/retdist.hpp"
#include "solvable_pg/valuefn.hpp"

namespace cli {

using namespace solvable_pg;

namespace {

template <class Dist>
Dist with_horizon(const HorizonOpts& h, const std::function<Dist(int)>& compute) {
  if (h.t_max > 0) return compute(h.t_max);
  return until_tail_below<Dist>(h.tail_tol, compute);
}

void add_count(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("count", "exact first-passage (or alcove interior) path counts");
  struct Opts {
    PathCountQuery q{3, 7, 3, 0};
    std::string route = "all";
    std::string eta, nu;
    int m = 0;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--L", o->q.L, "barrier")->capture_default_str();
  sub->add_option("--s0", o->q.s0, "start state")->capture_default_str();
  sub->add_option("--t", o->q.t, "steps")->capture_default_str();
  sub->add_option("--terminal", o->q.terminal, "0 or L")->capture_default_str();
  sub->add_option("--route", o->route, "binomial | trig | dp | all (all must agree)")
      ->capture_default_str()
      ->check(CLI::IsMember({"binomial", "trig", "dp", "all"}));
  sub->add_option("--eta", o->eta, "alcove start point; with --nu counts alcove walks instead");
  sub->add_option("--nu", o->nu, "alcove end point");
  sub->add_option("--m", o->m, "alcove scale");
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    Output out(ctx, sub, o->out);
    if (!o->nu.empty()) {
      AlcoveCountQuery q{parse_ints(o->eta), parse_ints(o->nu), 0, o->m};
      q.n = static_cast<int>(q.eta.size());
      out.csv().header({"count"});
      out.csv().row({alcove_count(q).str()});
      out.finish();
      return;
    }
    const auto& q = o->q;
    auto dp = [&] {
      if (q.terminal != 0 && q.terminal != q.L) throw DomainError("terminal must be 0 or L");
      const auto table = alive_counts_dp(GamblerEnv{q.L, q.s0, 0.0, 0.0}, q.t);
      return table[q.t][q.terminal];
    };
    BigInt result;
    if (o->route == "binomial") {
      result = count_binomial(q);
    } else if (o->route == "trig") {
      result = count_trig(q);
    } else if (o->route == "dp") {
      result = dp();
    } else {
      result = count_binomial(q);
      const BigInt trig = count_trig(q), table = dp();
      if (trig != result || table != result) {
        throw DomainError("routes disagree: binomial " + result.str() + ", trig " + trig.str() + ", dp " + table.str());
      }
    }
    out.csv().header({"count"});
    out.csv().row({result.str()});
    out.finish();
  });
}

void add_value_dist(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("value-dist", "exact return distribution of the gambler's ruin walk");
  struct Opts {
    GamblerOpts g;
    HorizonOpts h;
    double p = 0.5;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  o->g.add(sub);
  o->h.add(sub);
  sub->add_option("--p", o->p, "probability of a right step")->capture_default_str();
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    const auto dist = with_horizon<ReturnDistribution>(
        o->h, [&](int t) { return gambler_return_dist(o->g.env, o->p, t); });
    Output out(ctx, sub, o->out);
    write_return_dist(out.csv(), dist);
    out.finish();
  });
}

void add_value_fn(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("value-fn", "value v(p) and slope dv/dp over a p-grid");
  struct Opts {
    GamblerOpts g;
    std::string s0 = "all";
    int points = 512;
    std::string method = "chebyshev";
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  o->g.add(sub, false);
  sub->add_option("--s0", o->s0, "all, or comma-separated start states")->capture_default_str();
  sub->add_option("--grid,--points", o->points, "p_i = (i+1)/(points+1)")->capture_default_str();
  sub->add_option("--method", o->method, "chebyshev | linear")
      ->capture_default_str()
      ->check(CLI::IsMember({"chebyshev", "linear"}));
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    std::vector<int> starts;
    if (o->s0 == "all") {
      for (int s = 1; s < o->g.env.L; ++s) starts.push_back(s);
    } else {
      starts = parse_ints(o->s0);
    }
    if (o->points < 1) throw DomainError("--points must be >= 1");
    Output out(ctx, sub, o->out);
    out.csv().comment("method", o->method);
    out.csv().header({"p", "s0", "v", "dv_dp"});
    for (int s : starts) {
      GamblerEnv env = o->g.env;
      env.s0 = s;
      validate(env);
      for (int i = 0; i < o->points; ++i) {
        const double p = (i + 1.0) / (o->points + 1.0);
        const double v = o->method == "linear" ? value_linear_solve(env, p) : value_chebyshev(env, p);
        out.csv().row({CsvWriter::cell(p), CsvWriter::cell(s), CsvWriter::cell(v),
                       CsvWriter::cell(value_derivative(env, p))});
      }
    }
    out.finish();
  });
}

void write_gradients(CsvWriter& csv, const GradientDistribution& dist) {
  if (dist.dim() == 2) {
    csv.header({"grad", "grad2", "prob"});
  } else {
    csv.header({"grad", "prob"});
  }
  for (const auto& a : dist.atoms) {
    std::vector<std::string> cells;
    for (double g : a.grad) cells.push_back(CsvWriter::cell(g));
    cells.push_back(CsvWriter::cell(a.prob));
    csv.row(cells);
  }
  csv.trailer({{"tail_mass", format_real(dist.tail_mass)}});
}

void add_grad_dist(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("grad-dist", "law of the single-episode REINFORCE gradient");
  struct Opts {
    GamblerOpts g;
    HorizonOpts h;
    double theta = 0.0, theta_f = 0.0, theta_r = 0.0, tau = 1.0, epsilon = 0.0;
    bool flipped = false;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  o->g.add(sub);
  o->h.add(sub);
  sub->add_option("--theta", o->theta, "policy parameter")->capture_default_str();
  sub->add_option("--tau", o->tau, "temperature")->capture_default_str();
  sub->add_option("--epsilon", o->epsilon, "exploration floor")->capture_default_str();
  sub->add_flag("--flipped", o->flipped, "two-parameter policy on the flipped-state env");
  sub->add_option("--theta-f", o->theta_f, "flipped-state parameter")->capture_default_str();
  sub->add_option("--theta-r", o->theta_r, "parameter on the other states")->capture_default_str();
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    Output out(ctx, sub, o->out);
    if (o->flipped) {
      const FlippedGamblerEnv env{o->g.env, 1};
      const TwoParamPolicy policy{o->theta_f, o->theta_r, o->tau, o->epsilon};
      GradientDistribution dist;
      int t = o->h.t_max > 0 ? o->h.t_max : 64;
      for (;;) {
        dist = gradient_dist_flipped(env, policy, t);
        if (o->h.t_max > 0 || dist.tail_mass < o->h.tail_tol || t >= (1 << 20)) break;
        t *= 2;
      }
      write_gradients(out.csv(), dist);
    } else {
      const BoltzmannPolicy1D policy{o->theta, o->tau, o->epsilon};
      policy.check();
      const auto returns = with_horizon<ReturnDistribution>(o->h, [&](int t) {
        return gambler_return_dist(o->g.env, policy.prob_plus(), policy.prob_minus(), t);
      });
      write_gradients(out.csv(), gradient_dist_1d(o->g.env, policy, returns));
    }
    out.finish();
  });
}

void add_flipped_dist(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("flipped-dist", "return distribution with state 1 flipped");
  struct Opts {
    GamblerOpts g;
    HorizonOpts h;
    double p1 = 0.5, p2 = 0.5;
    bool by_visits = false;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  o->g.add(sub);
  o->h.add(sub);
  sub->add_option("--p1", o->p1, "probability of sampling +1 on the flipped state")->capture_default_str();
  sub->add_option("--p2", o->p2, "probability of sampling +1 elsewhere")->capture_default_str();
  sub->add_flag("--by-visits", o->by_visits, "split atoms by visits to the flipped state");
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    const FlippedGamblerEnv env{o->g.env, 1};
    const auto probs = FlippedActionProbs::from(o->p1, o->p2);
    const auto detail = with_horizon<FlippedReturnDistribution>(
        o->h, [&](int t) { return flipped_return_detail(env, probs, t); });
    Output out(ctx, sub, o->out);
    if (!o->by_visits) {
      write_return_dist(out.csv(), detail.collapse());
    } else {
      out.csv().header({"terminal", "t", "visits", "g", "prob"});
      for (const auto& a : detail.atoms) {
        const auto& term = detail.terminals[a.terminal];
        out.csv().row({std::to_string(term.state[0]), CsvWriter::cell(a.t), CsvWriter::cell(a.visits),
                       CsvWriter::cell(term.bonus - a.t), CsvWriter::cell(a.prob)});
      }
      out.csv().trailer({{"tail_mass", format_real(detail.tail_mass)}, {"t_max", std::to_string(detail.t_max)}});
    }
    out.finish();
  });
}

void add_alcove_dist(CLI::App& app, Context& ctx) {
  auto* sub = app.add_subcommand("alcove-dist", "return distribution of a walk in the alcove D^n_m");
  struct Opts {
    AlcoveOpts a;
    HorizonOpts h;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  o->a.add(sub);
  o->h.add(sub);
  sub->add_option("--out", o->out, "output file (default stdout)");
  ctx.add(sub, [o, sub, &ctx] {
    const auto env = o->a.env();
    const auto probs = o->a.action_probs();
    const auto dist = with_horizon<ReturnDistribution>(
        o->h, [&](int t) { return alcove_return_dist(env, probs, t); });
    Output out(ctx, sub, o->out);
    write_return_dist(out.csv(), dist);
    out.finish();
  });
}

}  // namespace

void register_dist_commands(CLI::App& app, Context& ctx) {
  add_count(app, ctx);
  add_value_dist(app, ctx);
  add_value_fn(app, ctx);
  add_grad_dist(app, ctx);
  add_flipped_dist(app, ctx);
  add_alcove_dist(app, ctx);
}

}  // namespace cli
