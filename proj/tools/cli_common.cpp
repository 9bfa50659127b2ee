#include "cli_common.hpp"

#include <iostream>

#include "solvable_pg/errors.hpp"

namespace cli {

using namespace solvable_pg;

void Output::finish() {
  const std::string text = buf_.str();
  if (path_.empty() || path_ == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  write_file(path_, text);
  write_manifest(ctx_, app_, {path_}, path_ + ".manifest.json");
}

nlohmann::json option_values(const CLI::App* app) {
  nlohmann::json out = nlohmann::json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? nlohmann::json(res.front()) : nlohmann::json(res);
    } else {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

void write_manifest(const Context& ctx, const CLI::App* app, const std::vector<std::string>& outputs,
                    const std::string& path) {
  RunManifest m;
  m.command_line = ctx.argv;
  m.config = option_values(app);
  m.seed = ctx.seed;
  m.outputs = outputs;
  m.write(path);
}

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    const auto b = cur.find_first_not_of(' ');
    const auto e = cur.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError("not a number: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_reals(text)) {
    if (v != static_cast<int>(v)) throw DomainError("not an integer: " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void GamblerOpts::add(CLI::App* app, bool with_s0) {
  app->add_option("--L", env.L, "number of steps between the barriers")->capture_default_str();
  if (with_s0) app->add_option("--s0", env.s0, "start state")->capture_default_str();
  app->add_option("--lambda0", env.lambda0, "bonus on reaching 0")->capture_default_str();
  app->add_option("--lambdaL", env.lambdaL, "bonus on reaching L")->capture_default_str();
}

void GridOpts::add(CLI::App* app) {
  app->add_option("--bins", grid.bins, "theta bins")->capture_default_str();
  app->add_option("--theta-min", grid.theta_min, "lower grid edge")->capture_default_str();
  app->add_option("--theta-max", grid.theta_max, "upper grid edge")->capture_default_str();
  app->add_option("--range", range, "grid edges as lo,hi (overrides --theta-min/--theta-max)");
  app->add_option("--subsamples", grid.subsamples, "theta samples per bin")->capture_default_str();
  app->add_option("--cutoff", cutoff, "gradient mass left unenumerated per sample")->capture_default_str();
  app->add_option("--tau", tau, "Boltzmann temperature")->capture_default_str();
  app->add_option("--epsilon", epsilon, "exploration floor")->capture_default_str();
}

GridSpec GridOpts::resolved() const {
  GridSpec g = grid;
  if (!range.empty()) {
    const auto r = parse_reals(range);
    if (r.size() != 2) throw DomainError("--range expects lo,hi");
    g.theta_min = r[0];
    g.theta_max = r[1];
  }
  g.check();
  return g;
}

void AlcoveOpts::add(CLI::App* app) {
  app->add_option("--n", n, "dimension")->capture_default_str();
  app->add_option("--m", m, "alcove scale")->capture_default_str();
  app->add_option("--eta", eta, "start point, comma separated")->capture_default_str();
  app->add_option("--rewards", rewards, "bonus per facet (default: m on the wrap facet, 0 elsewhere)");
  app->add_option("--probs", probs, "action probabilities (default uniform)");
}

AlcoveEnv AlcoveOpts::env() const {
  AlcoveEnv e;
  e.n = n;
  e.m = m;
  e.eta = parse_ints(eta);
  if (!rewards.empty()) e.rewards = parse_reals(rewards);
  validate(e);
  return e;
}

std::vector<double> AlcoveOpts::action_probs() const {
  if (probs.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n);
  return parse_reals(probs);
}

void HorizonOpts::add(CLI::App* app) {
  app->add_option("--t-max", t_max, "horizon (0: grow until the tail is below --tail-tol)")->capture_default_str();
  app->add_option("--tail-tol", tail_tol, "tail mass target when --t-max is 0")->capture_default_str();
}

void write_return_dist(CsvWriter& csv, const ReturnDistribution& dist) {
  csv.header({"terminal", "t", "g", "prob"});
  auto sorted = dist.atoms;
  std::stable_sort(sorted.begin(), sorted.end(), [](const ReturnAtom& a, const ReturnAtom& b) { return a.t < b.t; });
  for (const auto& a : sorted) {
    const auto& state = dist.terminals[a.terminal].state;
    const std::string name = state.size() == 1 ? std::to_string(state[0]) : format_state(state);
    csv.row({name, CsvWriter::cell(a.t), CsvWriter::cell(dist.g(a)), CsvWriter::cell(a.prob)});
  }
  csv.trailer({{"tail_mass", format_real(dist.tail_mass)}, {"t_max", std::to_string(dist.t_max)}});
}

}  // namespace cli
