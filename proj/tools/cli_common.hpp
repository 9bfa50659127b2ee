#pragma once

#include <CLI11.hpp>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "solvable_pg/config.hpp"
#include "solvable_pg/csv.hpp"
#include "solvable_pg/env.hpp"
#include "solvable_pg/paramchain.hpp"

namespace cli {

using Runner = std::function<void()>;

/// A leaf subcommand and the function that runs it once parsed.
struct Command {
  CLI::App* app = nullptr;
  Runner run;
};

/// Everything shared by the subcommands: the leaf commands and the argv copy.
struct Context {
  std::vector<Command> commands;
  std::vector<std::string> argv;
  std::uint64_t seed = 0;

  void add(CLI::App* app, Runner run) { commands.push_back({app, std::move(run)}); }
};

/// Collects CSV text; written to stdout or to `path` together with a manifest.
class Output {
 public:
  Output(const Context& ctx, const CLI::App* app, std::string path) : ctx_(ctx), app_(app), path_(std::move(path)) {}

  solvable_pg::CsvWriter& csv() { return writer_; }
  void finish();

 private:
  const Context& ctx_;
  const CLI::App* app_;
  std::string path_;
  std::ostringstream buf_;
  solvable_pg::CsvWriter writer_{buf_};
};

/// Option values of `app` (given or default) as a JSON object.
nlohmann::json option_values(const CLI::App* app);
void write_manifest(const Context& ctx, const CLI::App* app, const std::vector<std::string>& outputs,
                    const std::string& path);

/// Parses "a,b,c" into numbers / integers.
std::vector<double> parse_reals(const std::string& text);
std::vector<int> parse_ints(const std::string& text);

struct GamblerOpts {
  solvable_pg::GamblerEnv env;
  void add(CLI::App* app, bool with_s0 = true);
};

struct GridOpts {
  solvable_pg::GridSpec grid;
  std::string range;
  double cutoff = 1e-12;
  double tau = 1.0;
  double epsilon = 0.0;
  void add(CLI::App* app);
  solvable_pg::GridSpec resolved() const;
  solvable_pg::PolicyFamily family() const { return {tau, epsilon}; }
};

struct AlcoveOpts {
  int n = 3;
  int m = 6;
  std::string eta = "3,1,0";
  std::string rewards;
  std::string probs;
  void add(CLI::App* app);
  solvable_pg::AlcoveEnv env() const;
  std::vector<double> action_probs() const;
};

/// Horizon for return-law DPs: `t_max` when > 0, otherwise doubled until the
/// tail drops below `tail_tol`.
struct HorizonOpts {
  int t_max = 0;
  double tail_tol = 1e-12;
  void add(CLI::App* app);
};

void register_dist_commands(CLI::App& app, Context& ctx);
void register_chain_commands(CLI::App& app, Context& ctx);
void register_oracle_commands(CLI::App& app, Context& ctx);
void register_repro_commands(CLI::App& app, Context& ctx);

/// pi_i = i / (points + 1), i = 1..points.
std::vector<double> pi_grid(int points);
void write_absorption(solvable_pg::CsvWriter& csv, const std::vector<solvable_pg::SweepRow>& rows);
/// Evolves a point mass at pi_init (momentum when mu > 0) and writes
/// `iter,bin,theta_mid,pi_plus,prob` every `every` iterations.
void run_evolution(solvable_pg::CsvWriter& csv, const solvable_pg::GradientTable& table,
                   const solvable_pg::PolicyFamily& family, double alpha, double mu,
                   const solvable_pg::VelocityGrid& vel, solvable_pg::MomentumForm form, bool check_coarse,
                   double pi_init, int steps, int every, double min_prob);

/// CSV rows `terminal,t,g,prob` for a return law.
void write_return_dist(solvable_pg::CsvWriter& csv, const solvable_pg::ReturnDistribution& dist);

}  // namespace cli
