#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "heis/harness.hpp"

namespace heis {

int cli_main(int argc, char** argv) {
  CLI::App app{"Heisenberg-group diffusion experiments"};
  app.set_help_flag("-h,--help", "Show help");
  std::string experiment;
  app.add_option("experiment", experiment, "One of: simulate, ws-converge, energy-diverge, tube, girsanov-ratio, "
                                           "dds-diagnostics, helix, support, levy-law")
      ->required();
  std::string config_file, out_dir;
  int threads = 0;
  app.add_option("--config", config_file, "JSON config file; flags override its fields");
  app.add_option("--out", out_dir, "Output directory (default .)");
  app.add_option("--threads", threads, "Worker threads (0: OpenMP default)");

  // flag -> config field; values are coerced by ExperimentConfig::make
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--seed", "seed"},
      {"--trials", "trials"},
      {"--fine-step", "fine_step"},
      {"--deltas", "deltas"},
      {"--epsilon", "epsilon"},
      {"--phi", "phi"},
      {"--n", "n"},
      {"--target", "target"},
      {"--lambdas", "lambdas"},
      {"--times", "times"},
      {"--coarse-delta", "coarse_delta"},
      {"--steps", "steps"},
      {"--variant", "variant"},
      {"--interpolant", "interpolant"},
      {"--max-trials", "max_trials"},
      {"--min-accepted", "min_accepted"},
      {"--martingale-trials", "martingale_trials"},
      {"--stream", "stream"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [flag, field] : flags) app.add_option(flag, values[field]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const Experiment e = parse_experiment(experiment);
    json overrides = json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("config", "cannot open " + config_file);
      try {
        overrides = json::parse(in);
      } catch (const json::parse_error& ex) {
        throw ConfigError("config", ex.what());
      }
    }
    for (const auto& [flag, field] : flags) {
      if (app.count(flag) == 0) continue;
      overrides[field] = values[field];
    }
    if (app.count("--out")) overrides["out"] = out_dir;
    if (app.count("--threads")) overrides["threads"] = threads;
    const ExperimentConfig cfg = ExperimentConfig::make(e, overrides);
    const ExperimentResult r = run(cfg);
    write_outputs(r);
    for (const auto& a : r.assertions)
      std::printf("%-13s %s%s%s\n", a.passed ? "[pass]" : a.inconclusive ? "[inconclusive]" : "[FAIL]", a.name.c_str(),
                  a.detail.empty() ? "" : ": ", a.detail.c_str());
    std::printf("%s: %s (hash %s, %.2f s)\n", experiment.c_str(), to_string(r.status).c_str(), cfg.hash().c_str(),
                r.wall_clock);
    return exit_code(r.status);
  } catch (const ConfigError& ex) {
    std::fprintf(stderr, "invalid config: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}

}  // namespace heis
