#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gpcond/conditioning.hpp"
#include "gpcond/domain.hpp"
#include "gpcond/kernels.hpp"
#include "gpcond/sampling.hpp"

namespace gpcond {

/// Strictly increasing design sizes n_1 < n_2 < ...
class RefinementSchedule {
 public:
  explicit RefinementSchedule(std::vector<std::size_t> sizes);

  const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  std::size_t back() const { return sizes_.back(); }

 private:
  std::vector<std::size_t> sizes_;
};

/// The observed function g on the observation region.
class PathObservable {
 public:
  /// Tabulated 1-D path, linearly interpolated between strictly increasing
  /// abscissae and held constant outside them.
  static PathObservable sampled(std::vector<double> abscissae, Vector values);
  static PathObservable sampled(const std::vector<Point>& grid, Vector values);
  static PathObservable analytic(std::function<double(const Point&)> fn);

  double operator()(const Point& t) const;

 private:
  explicit PathObservable(std::function<double(const Point&)> fn) : fn_(std::move(fn)) {}
  std::function<double(const Point&)> fn_;
};

/// x' = sum_j w_j delta_{t_j}.
struct CharProbe {
  std::vector<Point> points;
  Vector weights;

  CharProbe(std::vector<Point> points, Vector weights);
};

/// Center point; alternating +-1 on 5 equispaced points; all-ones on 3 points.
/// Equispaced points run along the box diagonal from the lower to the upper corner.
std::vector<CharProbe> default_probes(const Domain& domain);

/// exp(i <w, mu> - w^T C w / 2) for the posterior mean mu and covariance C
/// at the probe points.
std::complex<double> char_functional(const PosteriorGp& post, const CharProbe& probe);

struct Tolerances {
  double mean_tol = 1e-6;
  double cov_tol = 1e-6;
};

/// One schedule level. The first level carries no deltas.
struct LevelRecord {
  std::size_t n = 0;
  std::optional<double> sup_mean_delta;
  std::optional<double> trace_cov_delta;
  double posterior_trace = 0.0;
  std::vector<std::complex<double>> char_values;
  std::vector<double> char_deltas;
  std::optional<double> sup_mean_err_vs_truth;

  double char_delta_max() const;
};

struct ConvergenceReport {
  std::vector<LevelRecord> levels;
  double prior_trace = 0.0;
  Tolerances tolerances;
  bool converged = false;
  /// Either delta sequence grew strictly across the last three delta levels.
  bool diverging = false;
};

struct RefineSettings {
  double noise_variance = 0.0;
  Tolerances tolerances;
  /// Empty means default_probes(prior.domain).
  std::vector<CharProbe> probes;
  double pinv_tol = kDefaultPinvTol;
  /// When set, design points are moved onto this grid (see snap_to_grid).
  std::optional<std::vector<Point>> snap_grid;
};

/// Moves each point, in order, to the nearest grid point not already taken.
/// Earlier points never move when later ones are added, so nested designs stay
/// nested. Throws when there are more points than grid points.
std::vector<Point> snap_to_grid(const std::vector<Point>& points, const std::vector<Point>& grid);

ConvergenceReport refine_and_monitor(const GpPrior& prior, const Domain& region,
                                     const PathObservable& g, const RefinementSchedule& schedule,
                                     const std::vector<Point>& test_grid,
                                     const RefineSettings& settings = {});

struct ContractionResult {
  ConvergenceReport report;
  /// The sampled truth path on the fine grid.
  PathSample truth;
};

/// Observes a sampled prior path on the whole domain through the schedule and
/// records sup |posterior mean - path| over the fine grid at every level.
ContractionResult contraction_experiment(const GpPrior& prior, std::uint64_t seed,
                                         const RefinementSchedule& schedule,
                                         const std::vector<Point>& fine_grid,
                                         const RefineSettings& settings = {});

}  // namespace gpcond
