#pragma once

#include <vector>

#include "gpcond/kernels.hpp"
#include "gpcond/linalg.hpp"

namespace gpcond {

/// Observed functionals, their values y and the noise variance sigma^2.
struct ObservationSet {
  std::vector<ObservationFunctional> functionals;
  Vector values;
  double noise_variance = 0.0;

  ObservationSet() = default;
  ObservationSet(std::vector<ObservationFunctional> functionals, Vector values,
                 double noise_variance = 0.0);

  /// Point evaluations y_j = X(s_j) + noise.
  static ObservationSet at_points(const std::vector<Point>& points, Vector values,
                                  double noise_variance = 0.0);

  std::size_t size() const noexcept { return functionals.size(); }
  bool empty() const noexcept { return functionals.empty(); }
};

/// Conditioned process. Immutable once built by condition().
///
/// With sigma^2 = 0 the weights are alpha = K_SS^dagger (y - m(S)); with
/// sigma^2 > 0 they are (K_SS + sigma^2 I)^{-1} (y - m(S)).
class PosteriorGp {
 public:
  const GpPrior& prior() const noexcept { return prior_; }
  const ObservationSet& observations() const noexcept { return obs_; }
  const PsdFactor& factor() const noexcept { return factor_; }
  const Vector& alpha() const noexcept { return alpha_; }
  const SymMatrix& gram_obs() const noexcept { return gram_obs_; }

  /// K_{t,S}: covariances of X_t with every observed functional.
  Vector cross_vector(const Point& t) const;

 private:
  friend PosteriorGp condition(const GpPrior&, ObservationSet, double);

  PosteriorGp(GpPrior prior, ObservationSet obs, PsdFactor factor, Vector alpha, SymMatrix gram)
      : prior_(std::move(prior)),
        obs_(std::move(obs)),
        factor_(std::move(factor)),
        alpha_(std::move(alpha)),
        gram_obs_(std::move(gram)) {}

  GpPrior prior_;
  ObservationSet obs_;
  PsdFactor factor_;
  Vector alpha_;
  SymMatrix gram_obs_;
};

PosteriorGp condition(const GpPrior& prior, ObservationSet obs,
                      double pinv_tol = kDefaultPinvTol);

double posterior_mean(const PosteriorGp& post, const Point& t);
Vector posterior_mean(const PosteriorGp& post, const std::vector<Point>& grid);
double posterior_cov(const PosteriorGp& post, const Point& t1, const Point& t2);
SymMatrix posterior_gram(const PosteriorGp& post, const std::vector<Point>& grid);

struct InterpolationReport {
  double max_mean_error = 0.0;
  double max_variance = 0.0;
  bool pass = true;
};

/// Checks m(s_j) == y_j and k(s_j, s_j) == 0 at noise-free point observations.
/// Throws invalid-usage for noisy or non-point observation sets.
InterpolationReport interpolation_check(const PosteriorGp& post, double tol);

}  // namespace gpcond
