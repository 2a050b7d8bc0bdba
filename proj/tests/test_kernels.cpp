#include <cmath>
#include <random>

#include "doctest.h"
#include "gpcond/error.hpp"
#include "gpcond/kernels.hpp"

using namespace gpcond;
using Functional = ObservationFunctional;

namespace {

std::vector<Kernel> all_kernels() {
  return {Kernel::brownian(),        Kernel::rbf(0.3, 2.0),    Kernel::matern12(0.25, 1.5),
          Kernel::matern32(0.2, 0.7), Kernel::matern52(0.4, 1.0), Kernel::linear(1.3)};
}

}  // namespace

TEST_CASE("kernel_eval examples") {
  const Kernel rbf = Kernel::rbf(1.0, 1.0);
  CHECK(kernel_eval(rbf, Point{0.4}, Point{0.4}) == 1.0);
  CHECK(kernel_eval(Kernel::brownian(), Point{0.3}, Point{0.7}) == 0.3);
  CHECK(kernel_eval(rbf, Point{0.0}, Point{1.0}) == doctest::Approx(0.6065306597126334).epsilon(1e-15));
}

TEST_CASE("kernel family formulas") {
  const Point s{0.1}, t{0.6};
  const double r = 0.5;
  CHECK(Kernel::matern12(0.3, 2.0)(s, t) == doctest::Approx(2.0 * std::exp(-r / 0.3)));
  const double a3 = std::sqrt(3.0) * r / 0.3;
  CHECK(Kernel::matern32(0.3, 2.0)(s, t) == doctest::Approx(2.0 * (1 + a3) * std::exp(-a3)));
  const double a5 = std::sqrt(5.0) * r / 0.3;
  CHECK(Kernel::matern52(0.3, 2.0)(s, t) ==
        doctest::Approx(2.0 * (1 + a5 + a5 * a5 / 3) * std::exp(-a5)));
  CHECK(Kernel::linear(2.0)(Point{1.0, 2.0}, Point{3.0, -1.0}) == doctest::Approx(2.0));
  CHECK(Kernel::brownian()(Point{0.5, 0.2}, Point{0.3, 0.9}) == doctest::Approx(0.3 * 0.2));
}

TEST_CASE("kernel parameter validation") {
  CHECK_THROWS_AS(Kernel::rbf(0.0), Error);
  CHECK_THROWS_AS(Kernel::matern32(-1.0), Error);
  CHECK_THROWS_AS(Kernel::rbf(1.0, 0.0), Error);
  CHECK_THROWS_AS(Kernel::linear(NAN), Error);
  CHECK_FALSE(Kernel::brownian().differentiable());
  CHECK_FALSE(Kernel::matern12(1.0).differentiable());
  CHECK(Kernel::rbf(1.0).differentiable());
  CHECK(Kernel::linear().differentiable());
}

TEST_CASE("gram examples") {
  CHECK(gram(Kernel::rbf(1.0), {}).size() == 0);
  const auto g = gram(Kernel::brownian(), {Point{0.5}, Point{1.0}});
  CHECK(g == SymMatrix::from_rows({{0.5, 0.5}, {0.5, 1.0}}));
  const auto r = gram(Kernel::rbf(0.3, 2.5), {Point{0.1}, Point{0.2}, Point{0.9}});
  for (std::size_t i = 0; i < 3; ++i) CHECK(r(i, i) == 2.5);
}

TEST_CASE("gram matrices are PSD for every family") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& k : all_kernels()) {
    for (std::size_t n : {5u, 20u, 40u}) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i) pts.push_back(Point{u(gen)});
      const auto g = gram(k, pts);
      const auto spec = eigh_sym(g);
      CHECK(spec.eigenvalues.front() >= -1e-10 * spec.eigenvalues.back());
    }
  }
}

TEST_CASE("cross_cov examples") {
  const Kernel rbf = Kernel::rbf(1.0, 1.0);
  const Point zero{0.0};
  CHECK(cross_cov(rbf, Functional::derivative(zero), Functional::point(zero)) == 0.0);

  const Kernel k = Kernel::rbf(0.4, 1.7);
  const Point t{0.3};
  CHECK(cross_cov(k, Functional::derivative(t), Functional::derivative(t)) ==
        doctest::Approx(1.7 / (0.4 * 0.4)).epsilon(1e-14));

  const Point s{0.2}, u{0.7};
  const Kernel m = Kernel::matern32(0.3);
  CHECK(cross_cov(m, Functional::weighted_sum({{2.0, s}}), Functional::point(u)) ==
        doctest::Approx(2.0 * m(s, u)).epsilon(1e-15));
}

TEST_CASE("derivative variances at zero lag") {
  const Point t{0.5};
  const auto d = Functional::derivative(t);
  CHECK(cross_cov(Kernel::matern32(0.3, 2.0), d, d) == doctest::Approx(2.0 * 3.0 / 0.09));
  CHECK(cross_cov(Kernel::matern52(0.3, 2.0), d, d) == doctest::Approx(2.0 * 5.0 / (3.0 * 0.09)));
  CHECK(cross_cov(Kernel::linear(2.0), d, d) == 2.0);
}

TEST_CASE("point-point cross_cov is kernel_eval bit for bit") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& k : all_kernels()) {
    for (int i = 0; i < 50; ++i) {
      const Point s{u(gen)}, t{u(gen)};
      CHECK(cross_cov(k, Functional::point(s), Functional::point(t)) == kernel_eval(k, s, t));
    }
  }
}

TEST_CASE("cross_cov symmetry and linearity") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> w(0.0, 1.0);
  for (const auto& k : all_kernels()) {
    for (int i = 0; i < 30; ++i) {
      const Point p1{u(gen)}, p2{u(gen)}, p3{u(gen)}, q{u(gen)};
      const double w1 = w(gen), w2 = w(gen), w3 = w(gen);
      const auto sum = Functional::weighted_sum({{w1, p1}, {w2, p2}, {w3, p3}});
      const auto delta = Functional::point(q);
      const double direct = cross_cov(k, sum, delta);
      const double expanded = w1 * k(p1, q) + w2 * k(p2, q) + w3 * k(p3, q);
      CHECK(std::abs(direct - expanded) <= 1e-12);
      CHECK(std::abs(cross_cov(k, sum, delta) - cross_cov(k, delta, sum)) <= 1e-12);
      if (k.differentiable()) {
        const auto d1 = Functional::derivative(p1);
        const auto d2 = Functional::derivative(q);
        CHECK(std::abs(cross_cov(k, d1, delta) - cross_cov(k, delta, d1)) <= 1e-12);
        CHECK(std::abs(cross_cov(k, d1, d2) - cross_cov(k, d2, d1)) <= 1e-12);
        CHECK(std::abs(cross_cov(k, d1, sum) - cross_cov(k, sum, d1)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("analytic derivatives match central finite differences") {
  const double h = 1e-5;
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Kernel kernels[] = {Kernel::rbf(0.3, 1.2), Kernel::matern52(0.4, 0.8),
                            Kernel::matern32(0.5, 1.0), Kernel::linear(0.9)};
  for (const auto& k : kernels) {
    for (int i = 0; i < 40; ++i) {
      const double s = u(gen), t = u(gen);
      const double fd_first = (k(Point{s + h}, Point{t}) - k(Point{s - h}, Point{t})) / (2 * h);
      CHECK(std::abs(cross_cov(k, Functional::derivative(Point{s}), Functional::point(Point{t})) -
                     fd_first) <= 1e-6);
      const double fd_second = (k(Point{s}, Point{t + h}) - k(Point{s}, Point{t - h})) / (2 * h);
      CHECK(std::abs(k.d_second(s, t) - fd_second) <= 1e-6);
      // Mixed partial from differences of the analytic first derivative.
      const double fd_both = (k.d_first(s, t + h) - k.d_first(s, t - h)) / (2 * h);
      if (std::abs(s - t) > 10 * h) CHECK(std::abs(k.d_both(s, t) - fd_both) <= 1e-5);
    }
  }
}

TEST_CASE("derivative functionals are rejected where undefined") {
  const auto d = Functional::derivative(Point{0.5});
  CHECK_THROWS_AS(cross_cov(Kernel::brownian(), d, Functional::point(Point{0.2})), Error);
  try {
    cross_cov(Kernel::matern12(1.0), d, d);
    FAIL("expected unsupported-functional");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedFunctional);
  }
  CHECK_THROWS_AS(Functional::derivative(Point{0.1, 0.2}), Error);
  CHECK_THROWS_AS(Functional::weighted_sum({}), Error);
  CHECK_THROWS_AS(Functional::weighted_sum({{INFINITY, Point{0.0}}}), Error);
}

TEST_CASE("mean_apply examples") {
  const Point t{0.4};
  CHECK(mean_apply(MeanFunction::zero(), Functional::point(t)) == 0.0);
  CHECK(mean_apply(MeanFunction::zero(), Functional::derivative(t)) == 0.0);
  CHECK(mean_apply(MeanFunction::constant(3.0), Functional::point(t)) == 3.0);
  CHECK(mean_apply(MeanFunction::constant(3.0), Functional::derivative(t)) == 0.0);
  CHECK(mean_apply(MeanFunction::constant(3.0), Functional::weighted_sum({{2.0, t}, {-0.5, t}})) ==
        4.5);

  const auto square = MeanFunction::callable([](const Point& p) { return p[0] * p[0]; },
                                             [](double x) { return 2 * x; });
  CHECK(mean_apply(square, Functional::point(t)) == doctest::Approx(0.16));
  CHECK(mean_apply(square, Functional::derivative(t)) == doctest::Approx(0.8));

  const auto no_derivative = MeanFunction::callable([](const Point& p) { return p[0]; });
  try {
    mean_apply(no_derivative, Functional::derivative(t));
    FAIL("expected unsupported-functional");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedFunctional);
  }
}

TEST_CASE("prior validation") {
  CHECK_THROWS_AS(GpPrior(Domain(-1.0, 1.0), MeanFunction::zero(), Kernel::brownian()), Error);
  CHECK_NOTHROW(GpPrior(Domain(-1.0, 1.0), MeanFunction::zero(), Kernel::rbf(0.2)));
}
