#include "cli_common.hpp"
#include "solvable_pg/errors.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/valuefn.hpp"

namespace cli {

using namespace solvable_pg;

namespace {

struct EnvChoice {
  std::string kind = "gambler";
  GamblerOpts g;
  AlcoveOpts a;

  void add(CLI::App* app) {
    app->add_option("--env", kind, "gambler | flipped | alcove")
        ->capture_default_str()
        ->check(CLI::IsMember({"gambler", "flipped", "alcove"}));
    g.add(app);
    a.add(app);
  }
};

void write_enumeration(CsvWriter& csv, const EnumerationResult& r, bool exact) {
  csv.comment("alive", r.alive.str());
  csv.comment("covered_mass", r.covered_mass.str());
  const auto dist = r.to_distribution();
  if (exact) {
    csv.header({"terminal", "t", "visits", "g", "prob", "prob_exact"});
    for (const auto& a : r.atoms) {
      const auto& term = r.terminals[a.terminal];
      const std::string name = term.state.size() == 1 ? std::to_string(term.state[0]) : format_state(term.state);
      csv.row({name, CsvWriter::cell(a.t), CsvWriter::cell(a.visits), CsvWriter::cell(term.bonus - a.t),
               CsvWriter::cell(static_cast<double>(a.prob)), a.prob.str()});
    }
    csv.trailer({{"tail_mass", format_real(dist.tail_mass)}, {"t_max", std::to_string(dist.t_max)}});
    return;
  }
  csv.header({"terminal", "t", "g", "prob"});
  for (const auto& a : dist.atoms) {
    const auto& state = dist.terminals[a.terminal].state;
    const std::string name = state.size() == 1 ? std::to_string(state[0]) : format_state(state);
    csv.row({name, CsvWriter::cell(a.t), CsvWriter::cell(dist.g(a)), CsvWriter::cell(a.prob)});
  }
  csv.trailer({{"tail_mass", format_real(dist.tail_mass)}, {"t_max", std::to_string(dist.t_max)}});
}

}  // namespace

void register_oracle_commands(CLI::App& app, Context& ctx) {
  auto* oracle = app.add_subcommand("oracle", "independent ground truth: enumeration, Monte Carlo, linear solves");
  oracle->require_subcommand(1);

  {
    auto* sub = oracle->add_subcommand("enum", "exact law over every action sequence (rational arithmetic)");
    struct Opts {
      EnvChoice e;
      std::string p = "1/2", p1 = "1/2", p2 = "1/2", probs;
      int t_max = 14;
      bool exact = false;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->e.add(sub);
    sub->add_option("--p", o->p, "right-step probability, exact (a/b or decimal)")->capture_default_str();
    sub->add_option("--p1", o->p1, "flipped-state +1 probability")->capture_default_str();
    sub->add_option("--p2", o->p2, "regular-state +1 probability")->capture_default_str();
    sub->add_option("--t-max", o->t_max, "horizon")->capture_default_str();
    sub->add_flag("--exact", o->exact, "per-visit atoms with exact probabilities");
    sub->add_option("--out", o->out, "output file (default stdout)");
    ctx.add(sub, [o, sub, &ctx] {
      EnumerationResult r;
      if (o->e.kind == "gambler") {
        r = enumerate(o->e.g.env, parse_rational(o->p), o->t_max);
      } else if (o->e.kind == "flipped") {
        r = enumerate(FlippedGamblerEnv{o->e.g.env, 1}, parse_rational(o->p1), parse_rational(o->p2), o->t_max);
      } else {
        std::vector<Rational> probs;
        if (o->e.a.probs.empty()) {
          probs.assign(static_cast<std::size_t>(o->e.a.n), Rational(1, o->e.a.n));
        } else {
          std::istringstream in(o->e.a.probs);
          std::string item;
          while (std::getline(in, item, ',')) probs.push_back(parse_rational(item));
        }
        r = enumerate(o->e.a.env(), probs, o->t_max);
      }
      Output out(ctx, sub, o->out);
      write_enumeration(out.csv(), r, o->exact);
      out.finish();
    });
  }

  {
    auto* sub = oracle->add_subcommand("mc", "Monte Carlo episode returns");
    struct Opts {
      EnvChoice e;
      double p = 0.5, p1 = 0.5, p2 = 0.5;
      SimulationOptions sim;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->e.add(sub);
    sub->add_option("--p", o->p, "right-step probability")->capture_default_str();
    sub->add_option("--p1", o->p1, "flipped-state +1 probability")->capture_default_str();
    sub->add_option("--p2", o->p2, "regular-state +1 probability")->capture_default_str();
    sub->add_option("--episodes", o->sim.episodes, "episodes")->capture_default_str();
    sub->add_option("--seed", o->sim.seed, "seed")->capture_default_str();
    sub->add_option("--max-steps", o->sim.max_steps, "episode length cap")->capture_default_str();
    sub->add_option("--out", o->out, "output file (default stdout)");
    ctx.add(sub, [o, sub, &ctx] {
      ctx.seed = o->sim.seed;
      SimulationResult r;
      if (o->e.kind == "gambler") {
        r = simulate(o->e.g.env, o->p, o->sim);
      } else if (o->e.kind == "flipped") {
        r = simulate(FlippedGamblerEnv{o->e.g.env, 1}, o->p1, o->p2, o->sim);
      } else {
        r = simulate(o->e.a.env(), o->e.a.action_probs(), o->sim);
      }
      Output out(ctx, sub, o->out);
      out.csv().comment("rng", r.rng);
      out.csv().comment("seed", std::to_string(r.seed));
      out.csv().comment("episodes", std::to_string(r.episodes));
      out.csv().comment("truncated", std::to_string(r.truncated));
      write_return_dist(out.csv(), r.to_distribution());
      out.finish();
    });
  }

  {
    auto* sub = oracle->add_subcommand("solve", "expected absorption time, hitting probability and value");
    struct Opts {
      GamblerOpts g;
      std::string p = "1/2";
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    o->g.add(sub);
    sub->add_option("--p", o->p, "right-step probability (a/b or decimal)")->capture_default_str();
    sub->add_option("--out", o->out, "output file (default stdout)");
    ctx.add(sub, [o, sub, &ctx] {
      const Rational p = parse_rational(o->p);
      const auto h = hitting_solve(o->g.env, static_cast<double>(p));
      const auto exact = exact_value(o->g.env, p);
      Output out(ctx, sub, o->out);
      out.csv().comment("v_exact", exact.value.str());
      out.csv().comment("dv_dp_exact", exact.slope.str());
      out.csv().header({"p", "s0", "expected_time", "prob_right", "v", "dv_dp"});
      out.csv().row({CsvWriter::cell(static_cast<double>(p)), CsvWriter::cell(o->g.env.s0),
                     CsvWriter::cell(h.expected_time), CsvWriter::cell(h.prob_right), CsvWriter::cell(h.value),
                     CsvWriter::cell(static_cast<double>(exact.slope))});
      out.finish();
    });
  }
}

}  // namespace cli
