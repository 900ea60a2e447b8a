// Command-line experiment runner.
//
//   lab check|lightcone|localization|clustering|ultralocal
//       --config <path> --out <dir> [--seed N] [--threads N]
//
// Exit codes: 0 ok, 2 config error, 3 hypothesis failure, 4 numeric failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "lab/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required();
  sub->add_option("--out", args.out_dir, "output directory");
  sub->add_option("--seed", args.seed, "override the config seed");
  sub->add_option("--threads", args.threads, "OpenMP thread count");
}

void configure_threads(const CommonArgs& args) {
#ifdef _OPENMP
  int threads = 0;
  if (args.threads) {
    threads = *args.threads;
  } else if (const char* env = std::getenv("LAB_THREADS")) {
    threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)args;
#endif
}

int run(const std::string& experiment, const CommonArgs& args) {
  configure_threads(args);
  lab::ExperimentConfig cfg;
  try {
    cfg = lab::load_config_file(args.config_path);
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lab::kConfigError;
  }
  if (cfg.experiment != experiment) {
    std::cerr << "config error: config is for experiment '" << cfg.experiment
              << "', subcommand is '" << experiment << "'\n";
    return lab::kConfigError;
  }
  if (args.seed) cfg.seed = *args.seed;
  try {
    const int code = lab::run_experiment(cfg, args.out_dir);
    if (code == lab::kHypothesisFailure)
      std::cerr << "hypothesis failure (report written)\n";
    return code;
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lab::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return lab::kNumericFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad light-cone laboratory"};
  app.require_subcommand(1);

  const std::vector<std::string> experiments = {
      "check", "lightcone", "localization", "clustering", "ultralocal"};
  std::vector<CommonArgs> args(experiments.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    CLI::App* sub = app.add_subcommand(experiments[i]);
    add_common(sub, args[i]);
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < experiments.size(); ++i)
    if (subs[i]->parsed()) return run(experiments[i], args[i]);
  return lab::kConfigError;
}
