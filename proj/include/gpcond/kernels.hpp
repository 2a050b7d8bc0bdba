#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "gpcond/domain.hpp"
#include "gpcond/linalg.hpp"

namespace gpcond {

enum class KernelFamily { Brownian, Rbf, Matern12, Matern32, Matern52, Linear };

std::string_view to_string(KernelFamily family) noexcept;

/// Covariance function k(s, t) of the prior.
///
/// Brownian is min(s, t) in one dimension and the Brownian sheet
/// prod_i min(s_i, t_i) in several. The stationary families use the Euclidean
/// distance r = |s - t|. Partial derivatives are available for the
/// differentiable families in one dimension only.
class Kernel {
 public:
  static Kernel brownian();
  static Kernel rbf(double lengthscale, double variance = 1.0);
  static Kernel matern12(double lengthscale, double variance = 1.0);
  static Kernel matern32(double lengthscale, double variance = 1.0);
  static Kernel matern52(double lengthscale, double variance = 1.0);
  static Kernel linear(double variance = 1.0);

  KernelFamily family() const noexcept { return family_; }
  double lengthscale() const noexcept { return lengthscale_; }
  double variance() const noexcept { return variance_; }

  /// False for Brownian and Matern-1/2, whose paths are not C^1.
  bool differentiable() const noexcept;

  double operator()(const Point& s, const Point& t) const;

  // One-dimensional partial derivatives of k(s, t).
  double d_first(double s, double t) const;   // dk/ds
  double d_second(double s, double t) const;  // dk/dt
  double d_both(double s, double t) const;    // d^2k/(ds dt)

 private:
  Kernel(KernelFamily family, double lengthscale, double variance);

  KernelFamily family_;
  double lengthscale_;
  double variance_;
};

double kernel_eval(const Kernel& k, const Point& s, const Point& t);

/// Gram matrix of k over `points`; the lower triangle mirrors the upper one.
SymMatrix gram(const Kernel& k, const std::vector<Point>& points);

/// Prior mean m(t).
class MeanFunction {
 public:
  using Fn = std::function<double(const Point&)>;
  using Derivative = std::function<double(double)>;

  static MeanFunction zero();
  static MeanFunction constant(double c);
  /// Arbitrary callable; `derivative` (1-D) is optional and enables DerivEval.
  static MeanFunction callable(Fn fn, Derivative derivative = {});

  double operator()(const Point& t) const;
  /// m'(t) in one dimension, or nullopt when the mean has no derivative.
  std::optional<double> derivative(double t) const;

  bool is_zero() const noexcept { return std::holds_alternative<Zero>(impl_); }
  std::optional<double> constant_value() const;

 private:
  struct Zero {};
  struct Constant {
    double value;
  };
  struct Callable {
    Fn fn;
    Derivative derivative;
  };
  using Impl = std::variant<Zero, Constant, Callable>;

  explicit MeanFunction(Impl impl) : impl_(std::move(impl)) {}
  Impl impl_;
};

/// Bounded linear functional on paths: point evaluation, a finite weighted
/// combination of point evaluations, or a derivative evaluation (1-D only).
class ObservationFunctional {
 public:
  struct PointEval {
    Point t;
  };
  struct Term {
    double weight;
    Point t;
  };
  struct WeightedSum {
    std::vector<Term> terms;
  };
  struct DerivEval {
    Point t;
  };
  using Kind = std::variant<PointEval, WeightedSum, DerivEval>;

  static ObservationFunctional point(Point t);
  static ObservationFunctional weighted_sum(std::vector<Term> terms);
  static ObservationFunctional derivative(Point t);

  const Kind& kind() const noexcept { return kind_; }
  bool is_point() const noexcept { return std::holds_alternative<PointEval>(kind_); }
  bool is_derivative() const noexcept { return std::holds_alternative<DerivEval>(kind_); }
  /// Every point the functional touches.
  std::vector<Point> support() const;

  /// Applies the functional to a plain function (point evaluations only).
  double apply(const std::function<double(const Point&)>& f) const;

 private:
  explicit ObservationFunctional(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// cov(a(X), b(X)): the bilinear extension of k to functionals.
double cross_cov(const Kernel& k, const ObservationFunctional& a, const ObservationFunctional& b);

/// a(m), the expectation of the observed functional.
double mean_apply(const MeanFunction& m, const ObservationFunctional& a);

struct GpPrior {
  Domain domain;
  MeanFunction mean;
  Kernel kernel;

  /// Validates that the kernel is defined on the domain (Brownian needs a
  /// non-negative domain, Linear is fine anywhere).
  GpPrior(Domain domain, MeanFunction mean, Kernel kernel);
};

}  // namespace gpcond
