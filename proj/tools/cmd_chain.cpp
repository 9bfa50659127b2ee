#include <cmath>

#include "cli_common.hpp"
#include "solvable_pg/errors.hpp"

namespace cli {

using namespace solvable_pg;

namespace {

struct ChainOpts {
  GamblerOpts g;
  GridOpts grid;
  double alpha = 2e-4;
  double mu = 0.0;
  int vel_bins = 101;
  double v_max = 0.25;
  std::string form = "heavy-ball";
  bool no_coarse_check = false;
  std::string out;

  void add(CLI::App* app, bool momentum) {
    g.add(app);
    grid.add(app);
    app->add_option("--alpha", alpha, "step size")->capture_default_str();
    if (momentum) {
      app->add_option("--momentum", mu, "momentum mu (0: plain SGA)")->capture_default_str();
      app->add_option("--vel-bins", vel_bins, "velocity centres (odd)")->capture_default_str();
      app->add_option("--v-max", v_max, "velocity grid half-width")->capture_default_str();
      app->add_option("--momentum-form", form, "heavy-ball | ema")
          ->capture_default_str()
          ->check(CLI::IsMember({"heavy-ball", "ema"}));
    }
    app->add_flag("--no-coarse-check", no_coarse_check, "allow steps larger than a quarter of the grid");
    app->add_option("--out", out, "output file (default stdout)");
  }

  GradientTable table() const { return tabulate_gradients(g.env, grid.family(), grid.resolved(), grid.cutoff); }

  MomentumOptions momentum_options() const {
    return {alpha, mu, form == "ema" ? MomentumForm::Ema : MomentumForm::HeavyBall, !no_coarse_check};
  }
};

void write_kernel(CsvWriter& csv, const Csr& rows, const std::vector<double>& clamped,
                  const std::vector<double>& truncated) {
  double row_err = 0.0;
  for (int r = 0; r < rows.rows; ++r) row_err = std::max(row_err, std::abs(rows.row_sum(r) - 1.0));
  csv.comment("max_row_error", row_err);
  csv.comment("max_clamped", *std::max_element(clamped.begin(), clamped.end()));
  csv.comment("max_truncated", *std::max_element(truncated.begin(), truncated.end()));
  csv.header({"from", "to", "prob"});
  for (int r = 0; r < rows.rows; ++r) {
    for (int k = rows.row_ptr[r]; k < rows.row_ptr[r + 1]; ++k) {
      csv.row({CsvWriter::cell(r), CsvWriter::cell(rows.col[k]), CsvWriter::cell(rows.val[k])});
    }
  }
}

}  // namespace

std::vector<double> pi_grid(int points) {
  if (points < 1) throw DomainError("--pi-points must be >= 1");
  std::vector<double> out;
  for (int i = 1; i <= points; ++i) out.push_back(static_cast<double>(i) / (points + 1));
  return out;
}

void write_absorption(CsvWriter& csv, const std::vector<SweepRow>& rows) {
  csv.header({"alpha", "pi_init", "converge_prob"});
  for (const auto& r : rows) {
    csv.row({CsvWriter::cell(r.alpha), CsvWriter::cell(r.pi_init), CsvWriter::cell(r.converge_prob)});
  }
}

static void write_evolution(CsvWriter& csv, const GridSpec& grid, const PolicyFamily& family, int iter,
                     std::span<const double> dist, double min_prob) {
  for (int b = 0; b < grid.bins; ++b) {
    if (!(dist[b] > min_prob)) continue;
    csv.row({CsvWriter::cell(iter), CsvWriter::cell(b), CsvWriter::cell(grid.mid(b)),
             CsvWriter::cell(family.at(grid.mid(b)).prob_plus()), CsvWriter::cell(dist[b])});
  }
}

void run_evolution(CsvWriter& csv, const GradientTable& table, const PolicyFamily& family, double alpha, double mu,
                   const VelocityGrid& vel, MomentumForm form, bool check_coarse, double pi_init, int steps, int every,
                   double min_prob) {
  if (every < 1) throw DomainError("--every must be >= 1");
  const GridSpec& grid = table.grid;
  const double theta0 = BoltzmannPolicy1D::theta_for(pi_init, family.tau, family.epsilon);
  csv.comment("pi_init", pi_init);
  csv.comment("alpha", alpha);
  csv.comment("momentum", mu);
  csv.header({"iter", "bin", "theta_mid", "pi_plus", "prob"});
  auto keep = [&](int it) { return it % every == 0 || it == steps; };
  if (mu > 0.0) {
    const auto kernel = build_momentum_kernel(table, vel, MomentumOptions{alpha, mu, form, check_coarse});
    evolve(kernel.rows, momentum_point_mass(kernel, theta0), steps, [&](int it, std::span<const double> d) {
      if (keep(it)) write_evolution(csv, grid, family, it, theta_marginal(kernel, d), min_prob);
    });
  } else {
    const auto kernel = build_kernel(table, KernelOptions{alpha, check_coarse});
    evolve(kernel.rows, point_mass(grid, theta0), steps, [&](int it, std::span<const double> d) {
      if (keep(it)) write_evolution(csv, grid, family, it, d, min_prob);
    });
  }
}

void register_chain_commands(CLI::App& app, Context& ctx) {
  auto* chain = app.add_subcommand("chain", "parameter Markov chain of policy gradient");
  chain->require_subcommand(1);

  {
    auto* sub = chain->add_subcommand("build", "transition kernel as sparse from,to,prob rows");
    auto o = std::make_shared<ChainOpts>();
    o->add(sub, true);
    ctx.add(sub, [o, sub, &ctx] {
      const auto table = o->table();
      Output out(ctx, sub, o->out);
      if (o->mu > 0.0) {
        const auto k = build_momentum_kernel(table, VelocityGrid{o->v_max, o->vel_bins}, o->momentum_options());
        out.csv().comment("state", "theta_bin*vel_bins+vel_bin");
        write_kernel(out.csv(), k.rows, k.clamped, k.truncated);
      } else {
        const auto k = build_kernel(table, KernelOptions{o->alpha, !o->no_coarse_check});
        write_kernel(out.csv(), k.rows, k.clamped, k.truncated);
      }
      out.finish();
    });
  }

  {
    auto* sub = chain->add_subcommand("evolve", "distribution of theta over PG iterations");
    struct Opts : ChainOpts {
      double init_pi = 0.5;
      int steps = 800;
      int every = 1;
      double min_prob = 0.0;
    };
    auto o = std::make_shared<Opts>();
    o->add(sub, true);
    sub->add_option("--init-pi", o->init_pi, "initial pi(+1); point mass in its bin")->capture_default_str();
    sub->add_option("--steps", o->steps, "PG iterations")->capture_default_str();
    sub->add_option("--every", o->every, "write every k-th iteration")->capture_default_str();
    sub->add_option("--min-prob", o->min_prob, "skip bins with prob <= this")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      Output out(ctx, sub, o->out);
      run_evolution(out.csv(), o->table(), o->grid.family(), o->alpha, o->mu, VelocityGrid{o->v_max, o->vel_bins},
                    o->momentum_options().form, !o->no_coarse_check, o->init_pi, o->steps, o->every, o->min_prob);
      out.finish();
    });
  }

  {
    auto* sub = chain->add_subcommand("absorb", "probability of converging to pi -> 1 per start");
    struct Opts : ChainOpts {
      std::vector<double> init_pi;
      int pi_points = 99;
    };
    auto o = std::make_shared<Opts>();
    o->add(sub, false);
    sub->add_option("--init-pi", o->init_pi, "start policies (default: --pi-points grid)")->delimiter(',');
    sub->add_option("--pi-points", o->pi_points, "pi_i = i/(points+1)")->capture_default_str();
    ctx.add(sub, [o, sub, &ctx] {
      const auto table = o->table();
      const auto pis = o->init_pi.empty() ? pi_grid(o->pi_points) : o->init_pi;
      const auto kernel = build_kernel(table, KernelOptions{o->alpha, !o->no_coarse_check});
      const auto result = absorption_probs(kernel);
      std::vector<SweepRow> rows;
      for (double pi : pis) {
        const int b = kernel.grid.bin_of(BoltzmannPolicy1D::theta_for(pi, o->grid.tau, o->grid.epsilon));
        rows.push_back({o->alpha, pi, result.to_optimal[b]});
      }
      Output out(ctx, sub, o->out);
      out.csv().comment("squarings", std::to_string(result.squarings));
      out.csv().comment("residual", result.residual);
      out.csv().comment("absorbing_bins", std::to_string(result.absorbing_bins.size()));
      write_absorption(out.csv(), rows);
      out.finish();
    });
  }

  {
    auto* sub = chain->add_subcommand("sweep", "convergence probability over a log alpha grid");
    struct Opts : ChainOpts {
      double alpha_min = 1e-5, alpha_max = 10.0;
      int alpha_points = 64;
      int pi_points = 99;
    };
    auto o = std::make_shared<Opts>();
    o->g.add(sub);
    o->grid.add(sub);
    sub->add_option("--alpha-min", o->alpha_min, "smallest step size")->capture_default_str();
    sub->add_option("--alpha-max", o->alpha_max, "largest step size")->capture_default_str();
    sub->add_option("--alpha-points", o->alpha_points, "log-spaced step sizes")->capture_default_str();
    sub->add_option("--pi-points", o->pi_points, "pi_i = i/(points+1)")->capture_default_str();
    sub->add_option("--out", o->out, "output file (default stdout)");
    ctx.add(sub, [o, sub, &ctx] {
      const auto alphas = log_grid(o->alpha_min, o->alpha_max, o->alpha_points);
      const auto pis = pi_grid(o->pi_points);
      const auto rows = convergence_sweep(o->table(), o->grid.family(), alphas, pis);
      Output out(ctx, sub, o->out);
      out.csv().comment("s0", std::to_string(o->g.env.s0));
      write_absorption(out.csv(), rows);
      out.finish();
    });
  }
}

}  // namespace cli
