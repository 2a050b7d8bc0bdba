#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpcond/conditioning.hpp"
#include "gpcond/domain.hpp"
#include "gpcond/kernels.hpp"

namespace gpcond {

enum class Command { Condition, Refine, Contract, Sample };

/// What `refine` observes on the region: the prior mean itself, a sine
/// sin(2 pi f * sum_i t_i), or one seeded prior path.
enum class ObservableKind { Mean, Sine, Sample };

struct ExperimentConfig {
  Command command = Command::Condition;
  Kernel kernel = Kernel::brownian();
  MeanFunction mean = MeanFunction::zero();
  Domain domain{0.0, 1.0};
  Domain region{0.0, 1.0};
  std::vector<ObservationFunctional> functionals;
  Vector values;
  std::vector<std::size_t> schedule;
  std::size_t test_grid_size = 257;
  double noise_variance = 0.0;
  double pinv_tol = kDefaultPinvTol;
  std::uint64_t seed = 0;
  std::filesystem::path output_path = ".";
  double mean_tol = 1e-6;
  double cov_tol = 1e-6;
  std::size_t sample_count = 10;
  ObservableKind observable = ObservableKind::Mean;
  double observable_frequency = 1.0;

  ObservationSet observation_set() const {
    return ObservationSet(functionals, values, noise_variance);
  }
};

/// Parses `key = value` lines. `#` starts a comment, lists are comma
/// separated. Relative `observations_file` paths resolve against `base_dir`.
/// Every error is a config error naming the line and key.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

ExperimentConfig load_config(const std::filesystem::path& path);

/// Parses one observation entry `[d]t1 t2 ...:y`; a leading `d` makes it a
/// derivative evaluation.
std::pair<ObservationFunctional, double> parse_observation(std::string_view entry);

}  // namespace gpcond
