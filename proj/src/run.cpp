#include "gpcond/run.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gpcond/csv.hpp"
#include "gpcond/error.hpp"
#include "gpcond/refinement.hpp"
#include "gpcond/sampling.hpp"

namespace gpcond {

namespace {

std::filesystem::path write_file(const std::filesystem::path& dir, const char* name,
                                 const std::string& contents) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "'");
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << contents;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
  return path;
}

std::string pointwise_report(const PosteriorGp& post, const std::vector<Point>& grid) {
  Vector mean(grid.size());
  Vector var(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mean[i] = posterior_mean(post, grid[i]);
    var[i] = posterior_cov(post, grid[i], grid[i]);
  }
  return pointwise_csv(grid, mean, var);
}

PathObservable make_observable(const ExperimentConfig& cfg, const GpPrior& prior,
                               const std::vector<Point>& grid) {
  switch (cfg.observable) {
    case ObservableKind::Mean:
      return PathObservable::analytic([m = prior.mean](const Point& t) { return m(t); });
    case ObservableKind::Sine:
      return PathObservable::analytic([f = cfg.observable_frequency](const Point& t) {
        double s = 0.0;
        for (double x : t.coords) s += x;
        return std::sin(2.0 * std::numbers::pi * f * s);
      });
    case ObservableKind::Sample: {
      const PathSample path = sample_paths(prior, grid, 1, cfg.seed);
      return PathObservable::sampled(grid, Vector(path.values.row(0).begin(), path.values.row(0).end()));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown observable");
}

}  // namespace

std::vector<Point> test_grid(const ExperimentConfig& config) {
  const std::size_t d = config.domain.dim();
  if (d == 1) return uniform_grid(config.domain, config.test_grid_size);
  const double root = std::round(std::pow(static_cast<double>(config.test_grid_size), 1.0 / static_cast<double>(d)));
  return uniform_grid(config.domain, std::max<std::size_t>(2, static_cast<std::size_t>(root)));
}

RunResult run(const ExperimentConfig& cfg) {
  const GpPrior prior(cfg.domain, cfg.mean, cfg.kernel);
  const std::vector<Point> grid = test_grid(cfg);
  RunResult result;

  switch (cfg.command) {
    case Command::Condition: {
      const PosteriorGp post = condition(prior, cfg.observation_set(), cfg.pinv_tol);
      result.written.push_back(write_file(cfg.output_path, "report.csv", pointwise_report(post, grid)));
      break;
    }
    case Command::Sample: {
      const PosteriorGp post = condition(prior, cfg.observation_set(), cfg.pinv_tol);
      const PathSample paths = sample_paths(post, grid, cfg.sample_count, cfg.seed);
      result.written.push_back(write_file(cfg.output_path, "report.csv", pointwise_report(post, grid)));
      result.written.push_back(write_file(cfg.output_path, "paths.csv", paths_csv(paths)));
      break;
    }
    case Command::Refine: {
      RefineSettings settings;
      settings.noise_variance = cfg.noise_variance;
      settings.tolerances = {cfg.mean_tol, cfg.cov_tol};
      settings.pinv_tol = cfg.pinv_tol;
      if (cfg.observable == ObservableKind::Sample) {
        // The sampled path is exact only at grid points, so observe there.
        std::vector<Point> inside;
        for (const auto& p : grid) {
          if (cfg.region.contains(p)) inside.push_back(p);
        }
        settings.snap_grid = std::move(inside);
      }
      const ConvergenceReport report =
          refine_and_monitor(prior, cfg.region, make_observable(cfg, prior, grid),
                             RefinementSchedule(cfg.schedule), grid, settings);
      result.written.push_back(write_file(cfg.output_path, "report.csv", convergence_csv(report)));
      if (!report.converged) result.exit_code = kExitNotConverged;
      break;
    }
    case Command::Contract: {
      RefineSettings settings;
      settings.noise_variance = cfg.noise_variance;
      settings.tolerances = {cfg.mean_tol, cfg.cov_tol};
      settings.pinv_tol = cfg.pinv_tol;
      const ContractionResult res =
          contraction_experiment(prior, cfg.seed, RefinementSchedule(cfg.schedule), grid, settings);
      result.written.push_back(write_file(cfg.output_path, "report.csv", convergence_csv(res.report)));
      result.written.push_back(write_file(cfg.output_path, "paths.csv", paths_csv(res.truth)));
      if (!res.report.converged) result.exit_code = kExitNotConverged;
      break;
    }
  }
  return result;
}

}  // namespace gpcond
