#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "solvable_pg/errors.hpp"
#include "solvable_pg/oracles.hpp"
#include "solvable_pg/retdist.hpp"
#include "solvable_pg/valuefn.hpp"

namespace cli {

using namespace solvable_pg;

namespace {

/// Writes each file into out_dir and a manifest.json covering all of them.
class Bundle {
 public:
  Bundle(const Context& ctx, const CLI::App* app, std::string dir) : ctx_(ctx), app_(app), dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create " + dir_ + ": " + ec.message());
  }

  void write(const std::string& name, const std::function<void(CsvWriter&)>& fill) {
    std::ostringstream buf;
    CsvWriter csv(buf);
    fill(csv);
    const std::string path = (std::filesystem::path(dir_) / name).string();
    write_file(path, buf.str());
    files_.push_back(path);
    std::cerr << "wrote " << path << '\n';
  }

  void finish() { write_manifest(ctx_, app_, files_, (std::filesystem::path(dir_) / "manifest.json").string()); }

 private:
  const Context& ctx_;
  const CLI::App* app_;
  std::string dir_;
  std::vector<std::string> files_;
};

}  // namespace

void register_repro_commands(CLI::App& app, Context& ctx) {
  auto* repro = app.add_subcommand("repro", "regenerate the published figure data sets");
  repro->require_subcommand(1);

  {
    auto* sub = repro->add_subcommand("fig1", "distributional evolution: SGA from pi=0.5, 0.56 and momentum from 0.5");
    struct Opts {
      GamblerOpts g;
      GridOpts grid;
      double alpha = 2e-4, mu = 0.2, v_max = 0.25, min_prob = 0.0;
      int steps = 800, vel_bins = 101, every = 1;
      std::string out_dir = "fig1";
    };
    auto o = std::make_shared<Opts>();
    o->g.add(sub);
    o->grid.add(sub);
    sub->add_option("--alpha", o->alpha, "step size")->capture_default_str();
    sub->add_option("--momentum", o->mu, "momentum for the third run")->capture_default_str();
    sub->add_option("--vel-bins", o->vel_bins, "velocity centres")->capture_default_str();
    sub->add_option("--v-max", o->v_max, "velocity grid half-width")->capture_default_str();
    sub->add_option("--steps", o->steps, "PG iterations")->capture_default_str();
    sub->add_option("--every", o->every, "write every k-th iteration")->capture_default_str();
    sub->add_option("--min-prob", o->min_prob, "skip bins with prob <= this")->capture_default_str();
    sub->add_option("--out-dir", o->out_dir, "output directory")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      const auto table = tabulate_gradients(o->g.env, o->grid.family(), o->grid.resolved(), o->grid.cutoff);
      const VelocityGrid vel{o->v_max, o->vel_bins};
      Bundle bundle(ctx, sub, o->out_dir);
      struct Run {
        std::string name;
        double pi, mu;
      };
      for (const Run& r : {Run{"fig1_sga_pi0.5.csv", 0.5, 0.0}, Run{"fig1_sga_pi0.56.csv", 0.56, 0.0},
                           Run{"fig1_momentum_pi0.5.csv", 0.5, o->mu}}) {
        bundle.write(r.name, [&](CsvWriter& csv) {
          run_evolution(csv, table, o->grid.family(), o->alpha, r.mu, vel, MomentumForm::HeavyBall, true, r.pi,
                        o->steps, o->every, o->min_prob);
        });
      }
      bundle.finish();
    });
  }

  {
    auto* sub = repro->add_subcommand("fig2", "value curves v(p) and dv/dp for every start state");
    struct Opts {
      GamblerOpts g;
      int points = 512;
      std::string out_dir = "fig2";
    };
    auto o = std::make_shared<Opts>();
    o->g.add(sub, false);
    sub->add_option("--points", o->points, "p-grid size")->capture_default_str();
    sub->add_option("--out-dir", o->out_dir, "output directory")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      if (o->points < 1) throw DomainError("--points must be >= 1");
      Bundle bundle(ctx, sub, o->out_dir);
      bundle.write("fig2.csv", [&](CsvWriter& csv) {
        csv.header({"p", "s0", "v", "dv_dp"});
        for (int s = 1; s < o->g.env.L; ++s) {
          GamblerEnv env = o->g.env;
          env.s0 = s;
          const auto curve = value_curve(env, o->points);
          for (const auto& x : curve.samples) {
            csv.row({CsvWriter::cell(x.p), CsvWriter::cell(s), CsvWriter::cell(x.v), CsvWriter::cell(x.dv_dp)});
          }
        }
      });
      bundle.finish();
    });
  }

  {
    auto* sub = repro->add_subcommand("fig3", "convergence probability over (alpha, pi_init), one file per s0");
    struct Opts {
      GamblerOpts g;
      GridOpts grid;
      std::vector<int> starts{1, 3, 5};
      double alpha_min = 1e-5, alpha_max = 10.0;
      int alpha_points = 64, pi_points = 99;
      std::string out_dir = "fig3";
    };
    auto o = std::make_shared<Opts>();
    o->g.add(sub, false);
    o->grid.add(sub);
    sub->add_option("--s0", o->starts, "start states")->delimiter(',')->capture_default_str();
    sub->add_option("--alpha-min", o->alpha_min, "smallest step size")->capture_default_str();
    sub->add_option("--alpha-max", o->alpha_max, "largest step size")->capture_default_str();
    sub->add_option("--alpha-points", o->alpha_points, "log-spaced step sizes")->capture_default_str();
    sub->add_option("--pi-points", o->pi_points, "pi_i = i/(points+1)")->capture_default_str();
    sub->add_option("--out-dir", o->out_dir, "output directory")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      const auto alphas = log_grid(o->alpha_min, o->alpha_max, o->alpha_points);
      const auto pis = pi_grid(o->pi_points);
      Bundle bundle(ctx, sub, o->out_dir);
      for (int s : o->starts) {
        GamblerEnv env = o->g.env;
        env.s0 = s;
        const auto table = tabulate_gradients(env, o->grid.family(), o->grid.resolved(), o->grid.cutoff);
        const auto rows = convergence_sweep(table, o->grid.family(), alphas, pis);
        bundle.write("fig3_s0_" + std::to_string(s) + ".csv", [&](CsvWriter& csv) {
          csv.comment("s0", std::to_string(s));
          write_absorption(csv, rows);
        });
      }
      bundle.finish();
    });
  }

  {
    auto* sub = repro->add_subcommand("fig4", "alcove D^3_6 walk from (3,1,0): return law and one sampled trajectory");
    struct Opts {
      AlcoveOpts a;
      int t_max = 0;
      double tail_tol = 1e-12;
      std::uint64_t seed = 0;
      std::string target = "6,2,2";
      int attempts = 1000000;
      std::string out_dir = "fig4";
    };
    auto o = std::make_shared<Opts>();
    o->a.add(sub);
    sub->add_option("--t-max", o->t_max, "horizon (0: until the tail is below --tail-tol)")->capture_default_str();
    sub->add_option("--tail-tol", o->tail_tol, "tail mass target")->capture_default_str();
    sub->add_option("--seed", o->seed, "first seed tried for the trajectory")->capture_default_str();
    sub->add_option("--target", o->target, "terminal state the trajectory must end on (empty: any)")
        ->capture_default_str();
    sub->add_option("--attempts", o->attempts, "seeds tried before giving up")->capture_default_str();
    sub->add_option("--out-dir", o->out_dir, "output directory")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      const auto env = o->a.env();
      const auto probs = o->a.action_probs();
      const auto dist = o->t_max > 0 ? alcove_return_dist(env, probs, o->t_max)
                                     : until_tail_below<ReturnDistribution>(o->tail_tol, [&](int t) {
                                         return alcove_return_dist(env, probs, t);
                                       });
      const std::vector<int> target = o->target.empty() ? std::vector<int>{} : parse_ints(o->target);
      std::vector<std::vector<int>> path;
      std::uint64_t seed = o->seed;
      for (int k = 0; k < o->attempts; ++k, ++seed) {
        path = sample_trajectory(env, probs, seed);
        if (target.empty() || path.back() == target) break;
        path.clear();
      }
      if (path.empty()) throw DomainError("no trajectory reached the target within --attempts seeds");
      ctx.seed = seed;
      Bundle bundle(ctx, sub, o->out_dir);
      bundle.write("fig4_dist.csv", [&](CsvWriter& csv) { write_return_dist(csv, dist); });
      bundle.write("fig4_trajectory.csv", [&](CsvWriter& csv) {
        csv.comment("seed", std::to_string(seed));
        csv.comment("rng", kRngName);
        std::vector<std::string> cols{"step"};
        for (int i = 0; i < env.n; ++i) cols.push_back("x" + std::to_string(i));
        csv.header(cols);
        for (std::size_t t = 0; t < path.size(); ++t) {
          std::vector<std::string> cells{std::to_string(t)};
          for (int v : path[t]) cells.push_back(std::to_string(v));
          csv.row(cells);
        }
      });
      bundle.finish();
    });
  }
}

}  // namespace cli
