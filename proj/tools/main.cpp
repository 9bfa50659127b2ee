#include <iostream>

#include "cli_common.hpp"
#include "solvable_pg/errors.hpp"
#include "solvable_pg/kernels.hpp"
#include "solvable_pg/version.hpp"

namespace {

int exit_code(solvable_pg::ErrorKind kind) {
  using solvable_pg::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidEnv: return 3;
    case ErrorKind::DimensionMismatch: return 4;
    case ErrorKind::PrecisionLoss: return 5;
    case ErrorKind::DomainError: return 6;
    case ErrorKind::GridTooCoarse: return 7;
    case ErrorKind::NoAbsorbingClass: return 8;
    case ErrorKind::NonConvergence: return 9;
    case ErrorKind::TooLarge: return 10;
    case ErrorKind::Io: return 11;
  }
  return 1;
}

// Config values become defaults of every option with a matching long name,
// so flags given on the command line still win.
void apply_config(CLI::App* app, const solvable_pg::ConfigMap& config, std::set<std::string>& used) {
  for (CLI::Option* opt : app->get_options()) {
    for (const auto& name : opt->get_lnames()) {
      const auto it = config.find(name);
      if (it == config.end() || name == "config" || name == "help") continue;
      opt->default_val(it->second);
      used.insert(name);
    }
  }
  for (CLI::App* sub : app->get_subcommands({})) apply_config(sub, config, used);
}

std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exactly solvable POMDPs: return and gradient laws, and the parameter Markov chain of policy gradient"};
  app.set_version_flag("--version", std::string(solvable_pg::kVersion));
  app.require_subcommand(1);
  int threads = 0;
  std::string config_path;
  app.add_option("--threads", threads, "thread cap (0: SOLVABLE_PG_THREADS or runtime default)")->capture_default_str();
  app.add_option("--config", config_path, "file of key = value lines used as option defaults");

  cli::Context ctx;
  ctx.argv.assign(argv, argv + argc);
  cli::register_dist_commands(app, ctx);
  cli::register_chain_commands(app, ctx);
  cli::register_oracle_commands(app, ctx);
  cli::register_repro_commands(app, ctx);

  try {
    const std::string path = find_config(argc, argv);
    if (!path.empty()) {
      const auto config = solvable_pg::load_config(path);
      std::set<std::string> used;
      apply_config(&app, config, used);
      for (const auto& [key, value] : config) {
        if (!used.count(key)) std::cerr << "warning: config key '" << key << "' matches no option\n";
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const solvable_pg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  }

  try {
    solvable_pg::set_threads(threads > 0 ? threads : solvable_pg::threads_from_env());
    for (const auto& cmd : ctx.commands) {
      if (cmd.app->parsed()) {
        cmd.run();
        return 0;
      }
    }
    std::cerr << app.help();
    return 2;
  } catch (const solvable_pg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
