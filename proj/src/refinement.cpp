#include "gpcond/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gpcond/error.hpp"

namespace gpcond {

RefinementSchedule::RefinementSchedule(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "refinement schedule is empty");
  }
  if (sizes_.front() < 1) {
    throw Error(ErrorKind::InvalidArgument, "refinement schedule sizes must be >= 1");
  }
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    if (sizes_[i] <= sizes_[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "refinement schedule must be strictly increasing");
    }
  }
}

PathObservable PathObservable::sampled(std::vector<double> xs, Vector ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw Error(ErrorKind::InvalidArgument, "sampled path needs matching, non-empty tables");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw Error(ErrorKind::InvalidArgument, "sampled path has non-finite entries");
    }
    if (i > 0 && xs[i] <= xs[i - 1]) {
      throw Error(ErrorKind::InvalidArgument, "sampled path abscissae must be increasing");
    }
  }
  return PathObservable([xs = std::move(xs), ys = std::move(ys)](const Point& t) {
    const double x = t[0];
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const std::size_t lo = hi - 1;
    if (x == xs[lo]) return ys[lo];
    const double frac = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + frac * (ys[hi] - ys[lo]);
  });
}

PathObservable PathObservable::sampled(const std::vector<Point>& grid, Vector values) {
  if (grid.empty() || grid.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "sampled path needs matching, non-empty tables");
  }
  if (grid.front().dim() == 1) {
    std::vector<double> xs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) xs[i] = grid[i][0];
    return sampled(std::move(xs), std::move(values));
  }
  // Several dimensions: only exact tabulation points can be observed.
  return PathObservable([grid, values = std::move(values)](const Point& t) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == t) return values[i];
    }
    throw Error(ErrorKind::InvalidArgument,
                "multi-dimensional sampled path evaluated off its tabulation grid");
  });
}

PathObservable PathObservable::analytic(std::function<double(const Point&)> fn) {
  if (!fn) throw Error(ErrorKind::InvalidArgument, "analytic observable is empty");
  return PathObservable(std::move(fn));
}

double PathObservable::operator()(const Point& t) const {
  const double v = fn_(t);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "observable returned a non-finite value");
  }
  return v;
}

CharProbe::CharProbe(std::vector<Point> p, Vector w) : points(std::move(p)), weights(std::move(w)) {
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorKind::InvalidArgument, "probe points and weights must match");
  }
  if (std::all_of(weights.begin(), weights.end(), [](double x) { return x == 0.0; })) {
    throw Error(ErrorKind::InvalidArgument, "probe weights are all zero");
  }
}

std::vector<CharProbe> default_probes(const Domain& domain) {
  auto diagonal = [&](std::size_t count) {
    std::vector<Point> pts;
    std::vector<double> unit(domain.dim());
    for (std::size_t j = 0; j < count; ++j) {
      std::fill(unit.begin(), unit.end(),
                static_cast<double>(j) / static_cast<double>(count - 1));
      pts.push_back(domain.from_unit(unit));
    }
    return pts;
  };
  std::vector<CharProbe> probes;
  probes.emplace_back(std::vector<Point>{domain.center()}, Vector{1.0});
  probes.emplace_back(diagonal(5), Vector{1.0, -1.0, 1.0, -1.0, 1.0});
  probes.emplace_back(diagonal(3), Vector{1.0, 1.0, 1.0});
  return probes;
}

std::complex<double> char_functional(const PosteriorGp& post, const CharProbe& probe) {
  const Vector mu = posterior_mean(post, probe.points);
  const SymMatrix cov = posterior_gram(post, probe.points);
  const double location = dot(probe.weights, mu);
  // The quadratic form is a variance; round-off below zero is discarded.
  const double spread = std::max(0.0, dot(probe.weights, cov * std::span<const double>(probe.weights)));
  return std::exp(-0.5 * spread) * std::complex<double>(std::cos(location), std::sin(location));
}

double LevelRecord::char_delta_max() const {
  double m = 0.0;
  for (double d : char_deltas) m = std::max(m, d);
  return m;
}

std::vector<Point> snap_to_grid(const std::vector<Point>& points, const std::vector<Point>& grid) {
  if (points.size() > grid.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "cannot snap " + std::to_string(points.size()) + " points onto a grid of " +
                    std::to_string(grid.size()));
  }
  std::vector<bool> taken(grid.size(), false);
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    std::size_t best = grid.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (taken[i]) continue;
      const double d = euclidean_distance(p, grid[i]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    taken[best] = true;
    out.push_back(grid[best]);
  }
  return out;
}

namespace {

bool strictly_growing_tail(const std::vector<double>& xs) {
  if (xs.size() < 3) return false;
  const std::size_t n = xs.size();
  return xs[n - 3] < xs[n - 2] && xs[n - 2] < xs[n - 1];
}

struct LevelState {
  Vector mean;
  SymMatrix gram;
  std::vector<std::complex<double>> chars;
};

ConvergenceReport run_levels(const GpPrior& prior, const std::vector<Point>& full_design,
                             const PathObservable& g, const RefinementSchedule& schedule,
                             const std::vector<Point>& test_grid, const RefineSettings& settings,
                             const Vector* truth) {
  if (test_grid.empty()) {
    throw Error(ErrorKind::InvalidArgument, "test grid is empty");
  }
  const std::vector<CharProbe> probes =
      settings.probes.empty() ? default_probes(prior.domain) : settings.probes;

  Vector y_full(full_design.size());
  for (std::size_t j = 0; j < full_design.size(); ++j) y_full[j] = g(full_design[j]);

  ConvergenceReport report;
  report.tolerances = settings.tolerances;
  report.prior_trace = gram(prior.kernel, test_grid).trace();

  std::optional<LevelState> previous;
  std::vector<double> mean_deltas;
  std::vector<double> cov_deltas;
  for (std::size_t n : schedule.sizes()) {
    const std::vector<Point> design(full_design.begin(), full_design.begin() + static_cast<std::ptrdiff_t>(n));
    const Vector y(y_full.begin(), y_full.begin() + static_cast<std::ptrdiff_t>(n));
    const PosteriorGp post = condition(
        prior, ObservationSet::at_points(design, y, settings.noise_variance), settings.pinv_tol);

    LevelState state{posterior_mean(post, test_grid), posterior_gram(post, test_grid), {}};
    for (const auto& probe : probes) state.chars.push_back(char_functional(post, probe));

    LevelRecord rec;
    rec.n = n;
    rec.posterior_trace = state.gram.trace();
    rec.char_values = state.chars;
    if (truth != nullptr) {
      double err = 0.0;
      for (std::size_t i = 0; i < test_grid.size(); ++i) {
        err = std::max(err, std::abs(state.mean[i] - (*truth)[i]));
      }
      rec.sup_mean_err_vs_truth = err;
    }
    if (previous) {
      double sup = 0.0;
      for (std::size_t i = 0; i < test_grid.size(); ++i) {
        sup = std::max(sup, std::abs(state.mean[i] - previous->mean[i]));
      }
      rec.sup_mean_delta = sup;
      rec.trace_cov_delta = trace_norm(previous->gram - state.gram);
      for (std::size_t p = 0; p < probes.size(); ++p) {
        rec.char_deltas.push_back(std::abs(state.chars[p] - previous->chars[p]));
      }
      mean_deltas.push_back(sup);
      cov_deltas.push_back(*rec.trace_cov_delta);
    }
    report.levels.push_back(std::move(rec));
    previous = std::move(state);
  }

  const LevelRecord& last = report.levels.back();
  report.converged = last.sup_mean_delta.has_value() &&
                     *last.sup_mean_delta <= settings.tolerances.mean_tol &&
                     *last.trace_cov_delta <= settings.tolerances.cov_tol;
  report.diverging = strictly_growing_tail(mean_deltas) || strictly_growing_tail(cov_deltas);
  return report;
}

}  // namespace

ConvergenceReport refine_and_monitor(const GpPrior& prior, const Domain& region,
                                     const PathObservable& g, const RefinementSchedule& schedule,
                                     const std::vector<Point>& test_grid,
                                     const RefineSettings& settings) {
  if (!prior.domain.contains(region)) {
    throw Error(ErrorKind::InvalidArgument, "observation region is not inside the domain");
  }
  std::vector<Point> design = nested_design(region, schedule.back()).points;
  if (settings.snap_grid) design = snap_to_grid(design, *settings.snap_grid);
  return run_levels(prior, design, g, schedule, test_grid, settings, nullptr);
}

ContractionResult contraction_experiment(const GpPrior& prior, std::uint64_t seed,
                                         const RefinementSchedule& schedule,
                                         const std::vector<Point>& fine_grid,
                                         const RefineSettings& settings) {
  if (fine_grid.empty()) {
    throw Error(ErrorKind::InvalidArgument, "fine grid is empty");
  }
  PathSample truth = sample_paths(prior, fine_grid, 1, seed);
  Vector path(truth.values.row(0).begin(), truth.values.row(0).end());
  const PathObservable g = PathObservable::sampled(fine_grid, path);

  std::vector<Point> design = nested_design(prior.domain, schedule.back()).points;
  design = snap_to_grid(design, fine_grid);
  ConvergenceReport report = run_levels(prior, design, g, schedule, fine_grid, settings, &path);
  return ContractionResult{std::move(report), std::move(truth)};
}

}  // namespace gpcond
