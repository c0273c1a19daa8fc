#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mtrsvd/experiment.hpp"

namespace {

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("MTRSVD_OUT_DIR")) {
    return env;
  }
  return "out";
}

struct CommonArgs {
  std::string config;
  std::string out = default_out_dir().string();
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out,
                  "output directory (default: $MTRSVD_OUT_DIR or ./out)");
  cmd->add_option("--threads", args.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed-override", args.seed_override,
                  "replace the config seed list with a single seed");
}

int run_mode(const CommonArgs& args,
             std::optional<mtrsvd::ExperimentConfig::Mode> force_mode) {
  mtrsvd::ExperimentConfig config = mtrsvd::ExperimentConfig::load(args.config);
  if (force_mode) config.mode = *force_mode;
  return mtrsvd::run_experiment(config, args.out, args.threads,
                                args.seed_override);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modified truncated randomized SVD experiment runner"};
  app.require_subcommand(1);

  CommonArgs run_args, bounds_args, sharpness_args;
  CLI::App* run = app.add_subcommand("run", "execute the configured experiment");
  add_common(run, run_args);
  CLI::App* bounds =
      app.add_subcommand("bounds", "Monte-Carlo check of the error bounds");
  add_common(bounds, bounds_args);
  CLI::App* sharpness =
      app.add_subcommand("sharpness", "compare simplified and refined bounds");
  add_common(sharpness, sharpness_args);

  std::string results_path;
  std::string summary_out = (default_out_dir() / "summary.csv").string();
  CLI::App* summ = app.add_subcommand("summarize", "aggregate results.csv");
  summ->add_option("--results", results_path, "results.csv to aggregate")
      ->required()
      ->check(CLI::ExistingFile);
  summ->add_option("--out", summary_out, "summary file to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_mode(run_args, std::nullopt);
    }
    if (bounds->parsed()) {
      return run_mode(bounds_args, mtrsvd::ExperimentConfig::Mode::Bounds);
    }
    if (sharpness->parsed()) {
      return run_mode(sharpness_args, mtrsvd::ExperimentConfig::Mode::Sharpness);
    }
    if (summ->parsed()) {
      const auto parent = std::filesystem::path(summary_out).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      mtrsvd::summarize(results_path, summary_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
