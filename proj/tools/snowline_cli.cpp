// Experiment runner for the snowline library: builds the configured space,
// runs one of the verification/experiment pipelines, and writes CSV tables
// plus a JSON manifest.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "snowline/experiment.hpp"

namespace {

struct VerbArgs {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
};

void add_verb(CLI::App& app, const std::string& name, const std::string& desc, VerbArgs& args,
              std::string& chosen) {
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->add_option("--config", args.config, "experiment configuration file")->required();
  sub->add_option("--out", args.out, "output directory");
  sub->add_option("--seed", args.seed, "seed override for randomized sweeps");
  sub->add_option("--n-max", args.n_max, "override the default recipe depth");
  sub->callback([&chosen, name] { chosen = name; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snowline: numerical experiments on a snowflaked line metric"};
  app.require_subcommand(1);

  VerbArgs args;
  std::string chosen;
  add_verb(app, "verify-lemmas", "randomized sweeps of the profile and metric inequalities",
           args, chosen);
  add_verb(app, "tangents", "rescaled-ball convergence toward the Euclidean line", args, chosen);
  add_verb(app, "covering", "covering numbers, Assouad sweep and doubling estimates", args,
           chosen);
  add_verb(app, "modulus", "discrete p-modulus divergence across the snowflaked intervals",
           args, chosen);
  add_verb(app, "sphere-metric", "bounded ball-chart metric property sweep", args, chosen);

  CLI11_PARSE(app, argc, argv);

  snowline::ExperimentConfig cfg;
  try {
    cfg = snowline::ExperimentConfig::from_file(args.config, chosen, args.out, args.seed,
                                                args.n_max);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(snowline::RunStatus::config_error);
  }

  try {
    const snowline::RunResult result = snowline::run_experiment(cfg);
    if (result.status != snowline::RunStatus::ok)
      std::fprintf(stderr, "error: %s\n", result.message.c_str());
    else
      std::printf("wrote %s\n", result.csv_path.string().c_str());
    return static_cast<int>(result.status);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(snowline::RunStatus::invariant_violation);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(snowline::RunStatus::config_error);
  }
}
