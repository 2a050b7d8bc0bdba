#include "gpcond/conditioning.hpp"

#include <algorithm>
#include <cmath>

#include "gpcond/error.hpp"

namespace gpcond {

ObservationSet::ObservationSet(std::vector<ObservationFunctional> f, Vector y, double noise)
    : functionals(std::move(f)), values(std::move(y)), noise_variance(noise) {
  if (functionals.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "observation count does not match value count");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::InvalidArgument, "observed values must be finite");
    }
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw Error(ErrorKind::InvalidArgument, "noise variance must be finite and >= 0");
  }
}

ObservationSet ObservationSet::at_points(const std::vector<Point>& points, Vector values,
                                         double noise_variance) {
  std::vector<ObservationFunctional> f;
  f.reserve(points.size());
  for (const auto& p : points) f.push_back(ObservationFunctional::point(p));
  return ObservationSet(std::move(f), std::move(values), noise_variance);
}

Vector PosteriorGp::cross_vector(const Point& t) const {
  const auto delta = ObservationFunctional::point(t);
  Vector v(obs_.size());
  for (std::size_t j = 0; j < obs_.size(); ++j) {
    v[j] = cross_cov(prior_.kernel, delta, obs_.functionals[j]);
  }
  return v;
}

PosteriorGp condition(const GpPrior& prior, ObservationSet obs, double pinv_tol) {
  const std::size_t n = obs.size();
  for (const auto& f : obs.functionals) {
    for (const auto& p : f.support()) {
      if (p.dim() != prior.domain.dim()) {
        throw Error(ErrorKind::InvalidArgument, "observation point has wrong dimension");
      }
    }
  }

  SymMatrix k_ss(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      k_ss.set(i, j, cross_cov(prior.kernel, obs.functionals[i], obs.functionals[j]));
    }
  }

  Vector residual(n);
  for (std::size_t j = 0; j < n; ++j) {
    residual[j] = obs.values[j] - mean_apply(prior.mean, obs.functionals[j]);
  }

  PsdFactor factor = obs.noise_variance > 0.0
                         ? PsdFactor(cholesky_shifted(k_ss, obs.noise_variance))
                         : PsdFactor(pinv_psd(k_ss, pinv_tol));
  Vector alpha = apply_factor(factor, residual);
  return PosteriorGp(prior, std::move(obs), std::move(factor), std::move(alpha),
                     std::move(k_ss));
}

double posterior_mean(const PosteriorGp& post, const Point& t) {
  const double m = post.prior().mean(t);
  if (post.observations().empty()) return m;
  return m + dot(post.cross_vector(t), post.alpha());
}

Vector posterior_mean(const PosteriorGp& post, const std::vector<Point>& grid) {
  Vector out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = posterior_mean(post, grid[i]);
  return out;
}

double posterior_cov(const PosteriorGp& post, const Point& t1, const Point& t2) {
  const double prior_cov = post.prior().kernel(t1, t2);
  if (post.observations().empty()) return prior_cov;
  const Vector w1 = whiten(post.factor(), post.cross_vector(t1));
  const Vector w2 = whiten(post.factor(), post.cross_vector(t2));
  return prior_cov - dot(w1, w2);
}

SymMatrix posterior_gram(const PosteriorGp& post, const std::vector<Point>& grid) {
  SymMatrix c = gram(post.prior().kernel, grid);
  if (post.observations().empty()) return c;
  std::vector<Vector> w;
  w.reserve(grid.size());
  for (const auto& t : grid) w.push_back(whiten(post.factor(), post.cross_vector(t)));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) c.set(i, j, c(i, j) - dot(w[i], w[j]));
  }
  return c;
}

InterpolationReport interpolation_check(const PosteriorGp& post, double tol) {
  const auto& obs = post.observations();
  if (obs.noise_variance > 0.0) {
    throw Error(ErrorKind::InvalidUsage, "interpolation_check requires noise-free observations");
  }
  InterpolationReport report;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const auto* pe = std::get_if<ObservationFunctional::PointEval>(&obs.functionals[j].kind());
    if (pe == nullptr) {
      throw Error(ErrorKind::InvalidUsage, "interpolation_check requires point evaluations");
    }
    report.max_mean_error =
        std::max(report.max_mean_error, std::abs(posterior_mean(post, pe->t) - obs.values[j]));
    report.max_variance =
        std::max(report.max_variance, std::abs(posterior_cov(post, pe->t, pe->t)));
  }
  report.pass = report.max_mean_error <= tol && report.max_variance <= tol;
  return report;
}

}  // namespace gpcond
