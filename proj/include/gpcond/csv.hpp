#pragma once

#include <string>
#include <vector>

#include "gpcond/domain.hpp"
#include "gpcond/linalg.hpp"
#include "gpcond/refinement.hpp"
#include "gpcond/sampling.hpp"

namespace gpcond {

/// 17 significant digits: parses back to the identical double.
std::string format_real(double v);

/// n, sup_mean_delta, trace_cov_delta, posterior_trace, char_delta_max,
/// sup_mean_err_vs_truth. Cells without a value (deltas at the first level,
/// truth error outside contraction runs) are left empty.
std::string convergence_csv(const ConvergenceReport& report);

/// t (or t0, t1, ...), posterior_mean, posterior_var.
std::string pointwise_csv(const std::vector<Point>& grid, const Vector& mean, const Vector& var);

/// Header of grid coordinates (space-separated within a point), one row per path.
std::string paths_csv(const PathSample& sample);

}  // namespace gpcond
