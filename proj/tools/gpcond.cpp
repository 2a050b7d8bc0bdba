// gpcond <config-path> [--pinv-tol X] [--seed N] [--out DIR]

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gpcond/config.hpp"
#include "gpcond/error.hpp"
#include "gpcond/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Condition Gaussian processes on finite and refining observation sets"};
  std::string config_path;
  std::optional<double> pinv_tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  app.add_option("config", config_path, "Experiment config file")->required();
  app.add_option("--pinv-tol", pinv_tol, "Relative pseudoinverse cutoff (overrides pinv_tol)");
  app.add_option("--seed", seed, "Random seed (overrides seed)");
  app.add_option("--out", out_dir, "Output directory (overrides output_path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? gpcond::kExitOk : gpcond::kExitError;
  }

  try {
    gpcond::ExperimentConfig config = gpcond::load_config(config_path);
    if (pinv_tol) {
      if (*pinv_tol < 0.0) {
        throw gpcond::Error(gpcond::ErrorKind::Config, "'--pinv-tol' must be >= 0");
      }
      config.pinv_tol = *pinv_tol;
    }
    if (seed) config.seed = *seed;
    if (out_dir) config.output_path = *out_dir;

    const gpcond::RunResult result = gpcond::run(config);
    for (const auto& path : result.written) std::cerr << "wrote " << path.string() << '\n';
    if (result.exit_code == gpcond::kExitNotConverged) {
      std::cerr << "tolerances not met; report written\n";
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "gpcond: " << e.what() << '\n';
    return gpcond::kExitError;
  }
}
