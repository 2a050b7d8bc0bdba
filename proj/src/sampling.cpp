#include "gpcond/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "gpcond/error.hpp"

namespace gpcond {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(splitmix64(seed)) {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;  // xorshift state must be non-zero
}

std::uint64_t Rng::next_u64() noexcept {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double Rng::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  return u * scale;
}

Vector standard_normals(Rng& rng, std::size_t count) {
  Vector z(count);
  for (double& x : z) x = rng.next_normal();
  return z;
}

PathSample sample_gaussian(const std::vector<Point>& grid, const Vector& mean,
                           const SymMatrix& cov, std::size_t count, std::uint64_t seed,
                           double tau) {
  const std::size_t n = grid.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "sampling grid is empty");
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  if (mean.size() != n || cov.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "mean/covariance size does not match grid");
  }

  // L = V Lambda_+^{1/2}; handles singular covariances without jitter.
  // Eigenvalues at round-off level are dropped as well as negative ones:
  // their square roots would otherwise leak ~1e-7 noise into rows whose
  // variance is exactly zero (noise-free observation sites).
  const SpectralDecomposition spec = eigh_sym(cov);
  const double cutoff = tau * std::max(spec.eigenvalues.back(), 0.0);
  Matrix factor(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = spec.eigenvalues[k];
    const double root = lambda > cutoff ? std::sqrt(lambda) : 0.0;
    for (std::size_t i = 0; i < n; ++i) factor(i, k) = spec.eigenvectors(i, k) * root;
  }

  Rng rng(seed);
  PathSample out{grid, Matrix(count, n), seed};
  for (std::size_t r = 0; r < count; ++r) {
    const Vector z = standard_normals(rng, n);
    for (std::size_t i = 0; i < n; ++i) out.values(r, i) = mean[i] + dot(factor.row(i), z);
  }
  return out;
}

PathSample sample_paths(const GpPrior& prior, const std::vector<Point>& grid, std::size_t count,
                        std::uint64_t seed, double tau) {
  Vector mean(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) mean[i] = prior.mean(grid[i]);
  return sample_gaussian(grid, mean, gram(prior.kernel, grid), count, seed, tau);
}

PathSample sample_paths(const PosteriorGp& post, const std::vector<Point>& grid,
                        std::size_t count, std::uint64_t seed, double tau) {
  return sample_gaussian(grid, posterior_mean(post, grid), posterior_gram(post, grid), count,
                         seed, tau);
}

}  // namespace gpcond
