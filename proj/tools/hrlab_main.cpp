#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hrlab/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "experiment config (JSON)")
      ->required();
  sub->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  sub->add_option("--out", args.out_dir, "override the output directory");
}

int run(const std::string& command, const CommonArgs& args) {
  hrlab::ExperimentConfig cfg = hrlab::load_config(args.config_path);
  if (cfg.experiment != command) {
    throw hrlab::ValidationError("config declares experiment '" +
                                 cfg.experiment + "' but subcommand is '" +
                                 command + "'");
  }
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  return hrlab::run_experiment(cfg, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator and attractor diagnostics for the "
               "diffusive Hindmarsh-Rose system"};
  app.require_subcommand(1);

  const char* names[] = {"simulate", "ode",       "absorb",   "squeeze",
                         "lipschitz", "determine", "dimension"};
  const char* blurbs[] = {
      "integrate one trajectory and record norm series",
      "integrate the space-clamped three-variable system",
      "probe the absorbing set with an ensemble of initial states",
      "run the spectral squeezing dichotomy over trajectory pairs",
      "check the Lipschitz growth ceiling over trajectory pairs",
      "test determining modes: low-mode convergence forces full convergence",
      "evaluate the fractal dimension bound"};

  CommonArgs args[7];
  for (int i = 0; i < 7; ++i) {
    add_common(app.add_subcommand(names[i], blurbs[i]), args[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems share the validation exit code; --help stays 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (int i = 0; i < 7; ++i) {
    if (!app.get_subcommand(names[i])->parsed()) continue;
    try {
      return run(names[i], args[i]);
    } catch (const hrlab::ValidationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const hrlab::BlowupError& e) {
      std::cerr << "blow-up: " << e.what() << " (last valid time "
                << e.last_valid_time() << ")\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
