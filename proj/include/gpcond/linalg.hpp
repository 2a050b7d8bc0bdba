#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace gpcond {

using Vector = std::vector<double>;

/// Dense row-major matrix. Used for eigenvector bases and triangular factors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Symmetric matrix with full row-major storage. Every write goes to both
/// triangles, so entries(i,j) == entries(j,i) holds bit-exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  /// Throws invalid-argument unless `rows` is square, finite and exactly symmetric.
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix identity(std::size_t n);
  static SymMatrix diagonal(std::span<const double> diag);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  std::span<const double> data() const noexcept { return data_; }

  double trace() const;
  double max_abs() const;
  bool all_finite() const;

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double c) const;
  Vector operator*(std::span<const double> v) const;

  bool operator==(const SymMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// A = V diag(lambda) V^T with eigenvalues ascending and V's columns the
/// matching orthonormal eigenvectors.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  SymMatrix reconstruct() const;
  /// V f(Lambda) V^T applied to v, where f maps eigenvalue index to weight.
  Vector apply_weighted(std::span<const double> weights, std::span<const double> v) const;
};

/// Cyclic Jacobi. Stops when the off-diagonal Frobenius norm is at most
/// 1e-12 * ||A||_F; more than 30 sweeps is a numerical-failure.
SpectralDecomposition eigh_sym(const SymMatrix& a);

inline constexpr double kDefaultPinvTol = 1e-10;

/// Moore-Penrose inverse of a PSD matrix in spectral form: eigenvalues above
/// `cutoff` are inverted, the rest are mapped to zero.
struct PinvFactor {
  SpectralDecomposition spectrum;
  std::size_t rank = 0;
  double cutoff = 0.0;

  std::size_t size() const noexcept { return spectrum.size(); }
  Vector apply(std::span<const double> v) const;
  /// w = (Lambda^dagger)^{1/2} V^T v, so that v^T A^dagger u == w(v) . w(u).
  Vector whiten(std::span<const double> v) const;
  SymMatrix matrix() const;
};

/// Lower Cholesky factor of A + shift * I.
struct CholeskyFactor {
  Matrix lower;
  double shift = 0.0;

  std::size_t size() const noexcept { return lower.rows(); }
  Vector solve(std::span<const double> b) const;
  /// L^{-1} b, so that b^T (A + shift I)^{-1} c == whiten(b) . whiten(c).
  Vector whiten(std::span<const double> b) const;
};

using PsdFactor = std::variant<PinvFactor, CholeskyFactor>;

Vector apply_factor(const PsdFactor& factor, std::span<const double> v);
Vector whiten(const PsdFactor& factor, std::span<const double> v);
std::size_t factor_size(const PsdFactor& factor);

/// Relative cutoff tau * max(lambda_max, 0). Throws not-psd when the smallest
/// eigenvalue is below -tau * lambda_max.
PinvFactor pinv_psd(const SymMatrix& a, double tau = kDefaultPinvTol);

/// Cholesky of A + sigma2 * I. Throws not-spd on a non-positive pivot.
CholeskyFactor cholesky_shifted(const SymMatrix& a, double sigma2);

/// (A + sigma2 I)^{-1} b.
Vector solve_spd(const SymMatrix& a, double sigma2, std::span<const double> b);

double trace_norm(const SymMatrix& a);
double operator_norm(const SymMatrix& a);

/// V max(Lambda, 0) V^T.
SymMatrix psd_project(const SymMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace gpcond
