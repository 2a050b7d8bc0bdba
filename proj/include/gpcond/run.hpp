#pragma once

#include <filesystem>
#include <vector>

#include "gpcond/config.hpp"

namespace gpcond {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> written;
};

/// Executes the configured workflow and writes report.csv (and paths.csv for
/// sample/contract) under config.output_path. Returns kExitNotConverged when
/// refine/contract miss their tolerances; the report is still written.
RunResult run(const ExperimentConfig& config);

std::vector<Point> test_grid(const ExperimentConfig& config);

}  // namespace gpcond
