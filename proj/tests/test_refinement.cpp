#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpcond/csv.hpp"
#include "gpcond/error.hpp"
#include "gpcond/refinement.hpp"

using namespace gpcond;

namespace {

const Domain kUnit(0.0, 1.0);

// Posterior variance of Brownian motion pinned at the sorted sites: a bridge
// between neighbours, free Brownian growth past the last site.
double brownian_trace_oracle(std::vector<double> sites, const std::vector<Point>& grid) {
  std::sort(sites.begin(), sites.end());
  double trace = 0.0;
  for (const auto& p : grid) {
    const double t = p[0];
    const auto hi = std::lower_bound(sites.begin(), sites.end(), t);
    if (hi == sites.end()) {
      trace += t - sites.back();
    } else if (*hi == t) {
      continue;
    } else {
      const double a = hi == sites.begin() ? 0.0 : *(hi - 1);
      const double b = *hi;
      trace += (t - a) * (b - t) / (b - a);
    }
  }
  return trace;
}

}  // namespace

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(RefinementSchedule({}), Error);
  CHECK_THROWS_AS(RefinementSchedule({0, 3}), Error);
  CHECK_THROWS_AS(RefinementSchedule({5, 3}), Error);
  CHECK_THROWS_AS(RefinementSchedule({3, 3}), Error);
  CHECK(RefinementSchedule({1, 2, 9}).back() == 9);
}

TEST_CASE("char functional examples") {
  const GpPrior brownian(kUnit, MeanFunction::zero(), Kernel::brownian());
  const PosteriorGp bridge = condition(brownian, ObservationSet::at_points({Point{1.0}}, {0.0}));
  const auto phi = char_functional(bridge, CharProbe({Point{0.5}}, {1.0}));
  CHECK(phi.real() == doctest::Approx(std::exp(-0.125)).epsilon(1e-15));
  CHECK(phi.real() == doctest::Approx(0.8824969).epsilon(1e-7));
  CHECK(phi.imag() == 0.0);

  const double c = 1.3;
  const PosteriorGp pinned = condition(brownian, ObservationSet::at_points({Point{1.0}}, {c}));
  const auto point_mass = char_functional(pinned, CharProbe({Point{1.0}}, {1.0}));
  CHECK(std::abs(point_mass) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(point_mass.real() == doctest::Approx(std::cos(c)).epsilon(1e-15));
  CHECK(point_mass.imag() == doctest::Approx(std::sin(c)).epsilon(1e-15));

  const GpPrior rbf(kUnit, MeanFunction::zero(), Kernel::rbf(0.3, 1.0));
  const PosteriorGp prior_only = condition(rbf, ObservationSet{});
  CHECK(char_functional(prior_only, CharProbe({Point{0.4}}, {1.0})).real() ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));

  CHECK_THROWS_AS(CharProbe({Point{0.4}}, {0.0}), Error);
  CHECK_THROWS_AS(CharProbe({Point{0.4}}, {1.0, 2.0}), Error);
}

TEST_CASE("default probes") {
  const auto probes = default_probes(Domain({{0, 2}, {1, 3}}));
  REQUIRE(probes.size() == 3);
  CHECK(probes[0].points == std::vector<Point>{Point{1.0, 2.0}});
  CHECK(probes[1].points.size() == 5);
  CHECK(probes[1].weights == Vector{1, -1, 1, -1, 1});
  CHECK(probes[1].points.front() == Point{0.0, 1.0});
  CHECK(probes[1].points.back() == Point{2.0, 3.0});
  CHECK(probes[2].weights == Vector{1, 1, 1});
  CHECK(probes[2].points[1] == Point{1.0, 2.0});
}

TEST_CASE("sampled observable interpolates linearly") {
  const auto g = PathObservable::sampled(std::vector<double>{0.0, 0.5, 1.0}, Vector{0.0, 2.0, -1.0});
  CHECK(g(Point{0.25}) == 1.0);
  CHECK(g(Point{0.5}) == 2.0);
  CHECK(g(Point{0.75}) == 0.5);
  CHECK(g(Point{1.0}) == -1.0);
  CHECK_THROWS_AS(PathObservable::sampled(std::vector<double>{0.0, 0.0}, Vector{1, 2}), Error);
  CHECK_THROWS_AS(PathObservable::sampled(std::vector<double>{0.0}, Vector{1, 2}), Error);
}

TEST_CASE("snapping keeps earlier points and never repeats a grid point") {
  const auto grid = uniform_grid(kUnit, 9);
  const auto design = nested_design(kUnit, 9).points;
  const auto snapped = snap_to_grid(design, grid);
  for (std::size_t m = 1; m <= 9; ++m) {
    const std::vector<Point> prefix(design.begin(), design.begin() + static_cast<std::ptrdiff_t>(m));
    const auto part = snap_to_grid(prefix, grid);
    for (std::size_t i = 0; i < m; ++i) CHECK(part[i] == snapped[i]);
  }
  auto sorted = snapped;
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
  CHECK(sorted == grid);
  CHECK_THROWS_AS(snap_to_grid(nested_design(kUnit, 10).points, grid), Error);
}

TEST_CASE("single-level schedule has nothing to compare") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.2));
  const auto g = PathObservable::analytic([](const Point& t) { return t[0]; });
  const auto report = refine_and_monitor(prior, kUnit, g, RefinementSchedule({5}), uniform_grid(kUnit, 33));
  REQUIRE(report.levels.size() == 1);
  CHECK_FALSE(report.levels[0].sup_mean_delta.has_value());
  CHECK_FALSE(report.levels[0].trace_cov_delta.has_value());
  CHECK(report.levels[0].char_deltas.empty());
  CHECK_FALSE(report.converged);
}

TEST_CASE("observing the prior mean leaves the mean untouched") {
  const MeanFunction mean = MeanFunction::callable([](const Point& t) { return std::cos(3.0 * t[0]); });
  const GpPrior prior(kUnit, mean, Kernel::matern52(0.2));
  const auto g = PathObservable::analytic([&](const Point& t) { return mean(t); });
  const auto report = refine_and_monitor(prior, kUnit, g, RefinementSchedule({2, 4, 8, 16}),
                                         uniform_grid(kUnit, 65));
  for (std::size_t i = 1; i < report.levels.size(); ++i) {
    CHECK(*report.levels[i].sup_mean_delta <= 1e-12);
  }

  // Zero mean: the characteristic functional is real.
  const GpPrior centred(kUnit, MeanFunction::zero(), Kernel::matern52(0.2));
  const auto zero = PathObservable::analytic([](const Point&) { return 0.0; });
  const auto r0 = refine_and_monitor(centred, kUnit, zero, RefinementSchedule({2, 4, 8}), uniform_grid(kUnit, 17));
  for (const auto& level : r0.levels) {
    for (double d : level.char_deltas) CHECK(d >= 0.0);
    for (const auto& phi : level.char_values) {
      CHECK(phi.imag() == 0.0);
      CHECK(std::abs(phi) <= 1.0);
    }
  }
}

TEST_CASE("Brownian motion observed on the whole interval") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::brownian());
  const auto grid = uniform_grid(kUnit, 257);
  const PathSample path = sample_paths(prior, grid, 1, 5);
  const auto g = PathObservable::sampled(grid, Vector(path.values.row(0).begin(), path.values.row(0).end()));
  const RefinementSchedule schedule({3, 5, 9, 17, 33, 65});
  const auto report = refine_and_monitor(prior, kUnit, g, schedule, grid);

  REQUIRE(report.levels.size() == 6);
  CHECK(report.prior_trace == doctest::Approx(128.5).epsilon(1e-14));
  const auto design = nested_design(kUnit, 65).points;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const std::size_t n = schedule.sizes()[i];
    std::vector<double> sites;
    for (std::size_t j = 0; j < n; ++j) sites.push_back(design[j][0]);
    CHECK(std::abs(report.levels[i].posterior_trace - brownian_trace_oracle(sites, grid)) <= 1e-9);
    if (i > 0) CHECK(report.levels[i].posterior_trace < report.levels[i - 1].posterior_trace);
  }
  CHECK(report.levels.back().posterior_trace <= 1e-2 * report.prior_trace);
}

TEST_CASE("contraction with every grid point observed recovers the path") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::matern32(0.3));
  const auto fine = uniform_grid(kUnit, 17);
  const auto result = contraction_experiment(prior, 11, RefinementSchedule({3, 5, 9, 17}), fine);
  const auto& levels = result.report.levels;
  REQUIRE(levels.size() == 4);
  CHECK(*levels.back().sup_mean_err_vs_truth <= 1e-6);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    CHECK(levels[i].posterior_trace <= levels[i - 1].posterior_trace + 1e-9);
    CHECK(*levels[i].trace_cov_delta >= -1e-12);
  }
  CHECK(result.truth.count() == 1);
  CHECK(result.truth.grid == fine);
}

TEST_CASE("contraction for a smooth prior") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.2));
  const auto result = contraction_experiment(prior, 99, RefinementSchedule({3, 5, 9, 17, 33, 65}),
                                             uniform_grid(kUnit, 257));
  const auto& levels = result.report.levels;
  CHECK(*levels.back().sup_mean_err_vs_truth <= 1e-2 * *levels.front().sup_mean_err_vs_truth);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    CHECK(levels[i].posterior_trace <= levels[i - 1].posterior_trace + 1e-9);
  }
}

TEST_CASE("identical inputs give identical reports") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::matern52(0.25));
  const auto fine = uniform_grid(kUnit, 65);
  const RefinementSchedule schedule({2, 4, 8, 16});
  const auto a = contraction_experiment(prior, 3, schedule, fine);
  const auto b = contraction_experiment(prior, 3, schedule, fine);
  CHECK(convergence_csv(a.report) == convergence_csv(b.report));
  CHECK(paths_csv(a.truth) == paths_csv(b.truth));
  const auto c = contraction_experiment(prior, 4, schedule, fine);
  CHECK(convergence_csv(a.report) != convergence_csv(c.report));
}

TEST_CASE("interpolation holds at every level for a nonsingular Gram") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::matern32(0.2));
  const auto g = PathObservable::analytic([](const Point& t) { return std::sin(5.0 * t[0]); });
  const auto design = nested_design(kUnit, 33).points;
  for (std::size_t n : {3u, 5u, 9u, 17u, 33u}) {
    const std::vector<Point> pts(design.begin(), design.begin() + static_cast<std::ptrdiff_t>(n));
    Vector y;
    for (const auto& p : pts) y.push_back(g(p));
    CHECK(interpolation_check(condition(prior, ObservationSet::at_points(pts, y)), 1e-6).pass);
  }
}

TEST_CASE("partial observation: certainty on S, prior uncertainty far away") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.05));
  const Domain region(0.0, 0.5);
  const auto zero = PathObservable::analytic([](const Point&) { return 0.0; });
  const auto grid = uniform_grid(kUnit, 129);
  const auto report = refine_and_monitor(prior, region, zero, RefinementSchedule({17, 65}), grid);
  CHECK(report.levels.size() == 2);

  const auto design = nested_design(region, 65).points;
  const PosteriorGp post = condition(prior, ObservationSet::at_points(design, Vector(65, 0.0)));
  for (const auto& t : uniform_grid(region, 65)) CHECK(posterior_cov(post, t, t) <= 1e-4);
  CHECK(posterior_cov(post, Point{1.0}, Point{1.0}) >= 0.5 * prior.kernel(Point{1.0}, Point{1.0}));
}

TEST_CASE("rough observations raise the diverging flag") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.2));
  const auto g = PathObservable::analytic(
      [](const Point& t) { return std::sin(2.0 * std::numbers::pi * 40.0 * t[0]); });
  const auto report = refine_and_monitor(prior, kUnit, g, RefinementSchedule({2, 4, 8, 16, 32, 64}),
                                         uniform_grid(kUnit, 129));
  CHECK(report.diverging);
  CHECK_FALSE(report.converged);
}

TEST_CASE("converged flag follows the tolerances") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.3));
  const auto g = PathObservable::analytic([](const Point& t) { return t[0] * t[0]; });
  RefineSettings loose;
  loose.tolerances = {1e-2, 1e-2};
  RefineSettings strict;
  strict.tolerances = {0.0, 0.0};
  const RefinementSchedule schedule({4, 8, 16, 32});
  const auto grid = uniform_grid(kUnit, 65);
  CHECK(refine_and_monitor(prior, kUnit, g, schedule, grid, loose).converged);
  CHECK_FALSE(refine_and_monitor(prior, kUnit, g, schedule, grid, strict).converged);
}

TEST_CASE("refinement argument checks") {
  const GpPrior prior(kUnit, MeanFunction::zero(), Kernel::rbf(0.3));
  const auto g = PathObservable::analytic([](const Point&) { return 0.0; });
  CHECK_THROWS_AS(refine_and_monitor(prior, Domain(0.0, 2.0), g, RefinementSchedule({2, 4}),
                                     uniform_grid(kUnit, 5)),
                  Error);
  CHECK_THROWS_AS(refine_and_monitor(prior, kUnit, g, RefinementSchedule({2, 4}), {}), Error);
  CHECK_THROWS_AS(contraction_experiment(prior, 1, RefinementSchedule({2, 40}), uniform_grid(kUnit, 33)),
                  Error);
}
