#include "graphred/cli.hpp"

#include "commands.hpp"
#include "graphred/error.hpp"

#include "CLI11.hpp"

#include <functional>
#include <ostream>

namespace graphred {

namespace {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::parameter:
      return exit_config;
    case ErrorKind::io:
    case ErrorKind::parse:
      return exit_io;
    default:
      return exit_numerical;
  }
}

struct Command {
  const char* name;
  const char* help;
  void (*run)(const app::RunConfig&, std::ostream&);
};

constexpr Command kCommands[] = {
    {"generate", "Write a synthetic or point-cloud dataset bundle", app::cmd_generate},
    {"tune", "Grid-search scalar hyperparameters on the train split", app::cmd_tune},
    {"denoise", "Denoise a split and write per-sample outputs and metrics", app::cmd_denoise},
    {"train", "Learn per-layer parameters of the unrolled RED solver", app::cmd_train},
    {"check", "Empirical homogeneity and passivity of the graph denoisers", app::cmd_check},
    {"spectrum", "Export h_lr and h_red frequency responses", app::cmd_spectrum},
    {"eval", "Score denoised CSV files against the clean signals", app::cmd_eval},
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Graph-signal denoising with regularization by denoising", "graphred"};
  cli.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  auto* opt_config = cli.add_option("--config", config_path, "JSON run configuration");
  auto* opt_seed = cli.add_option("--seed", seed, "Seed (overrides config)");
  auto* opt_out = cli.add_option("--out", out_dir, "Output directory (overrides config)");
  auto* opt_threads = cli.add_option("--threads", threads, "Worker threads (overrides config)")
                          ->check(CLI::PositiveNumber);
  opt_config->check(CLI::ExistingFile);

  const Command* chosen = nullptr;
  for (const auto& c : kCommands) {
    auto* sub = cli.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->callback([&chosen, &c] { chosen = &c; });
  }

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    app::FlagOverrides flags;
    if (opt_config->count()) flags.config_path = config_path;
    if (opt_seed->count()) flags.seed = seed;
    if (opt_out->count()) flags.out = out_dir;
    if (opt_threads->count()) flags.threads = threads;
    const auto cfg = app::RunConfig::load(flags);
    chosen->run(cfg, out);
    return exit_ok;
  } catch (const Error& e) {
    err << "graphred " << chosen->name << ": " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "graphred " << chosen->name << ": io error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    err << "graphred " << chosen->name << ": error: " << e.what() << "\n";
    return exit_numerical;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"graphred"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace graphred
