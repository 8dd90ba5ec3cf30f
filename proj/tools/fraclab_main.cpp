#include "fraclab/config.hpp"
#include "fraclab/experiment.hpp"
#include "fraclab/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
};

int dispatch(const CliOptions& opts, const std::string& command) {
  fraclab::config::ExperimentConfig cfg;
  try {
    cfg = fraclab::config::parse_file(opts.config_path);
  } catch (const std::exception& e) {
    std::cerr << "fraclab: " << e.what() << "\n";
    return fraclab::experiment::kExitConfigInvalid;
  }
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  if (opts.threads) cfg.threads = *opts.threads;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.budget) cfg.budget = *opts.budget;
  return fraclab::experiment::run(cfg, command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("fraclab ") + fraclab::version::kString +
               " - fractal measures, Fourier asymptotics, and Hardy-type "
               "inequality checks at desk scale"};
  app.require_subcommand(1);

  CliOptions opts;
  std::string command;
  for (const char* name :
       {"dimension", "geometry", "fourier", "asymptotics", "hardy", "verify",
        "all"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config_path, "experiment configuration")
        ->required();
    sub->add_option("--out", opts.out_dir, "output directory override");
    sub->add_option("--threads", opts.threads, "worker thread count")
        ->envname("FRACLAB_THREADS");
    sub->add_option("--seed", opts.seed, "sampling seed override");
    sub->add_option("--budget", opts.budget, "atom budget override");
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fraclab::experiment::kExitConfigInvalid;
  }
  return dispatch(opts, command);
}
