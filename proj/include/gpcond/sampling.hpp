#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpcond/conditioning.hpp"
#include "gpcond/kernels.hpp"
#include "gpcond/linalg.hpp"

namespace gpcond {

/// xorshift64* seeded through splitmix64. Same seed, same stream on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit() noexcept;
  /// Standard normal via the Marsaglia polar method.
  double next_normal();

 private:
  std::uint64_t state_;
  std::optional<double> spare_;
};

Vector standard_normals(Rng& rng, std::size_t count);

/// Sample paths on a grid; row i of `values` is the i-th path.
struct PathSample {
  std::vector<Point> grid;
  Matrix values;
  std::uint64_t seed = 0;

  std::size_t count() const noexcept { return values.rows(); }
};

/// Draws mean + V Lambda_+^{1/2} z for a mean vector and covariance on a
/// grid. Eigenvalues at or below tau * lambda_max count as zero.
PathSample sample_gaussian(const std::vector<Point>& grid, const Vector& mean,
                           const SymMatrix& cov, std::size_t count, std::uint64_t seed,
                           double tau = kDefaultPinvTol);

PathSample sample_paths(const GpPrior& prior, const std::vector<Point>& grid, std::size_t count,
                        std::uint64_t seed, double tau = kDefaultPinvTol);
PathSample sample_paths(const PosteriorGp& post, const std::vector<Point>& grid,
                        std::size_t count, std::uint64_t seed, double tau = kDefaultPinvTol);

}  // namespace gpcond
