#include "gpcond/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gpcond/error.hpp"

namespace gpcond {

namespace {

constexpr double kJacobiRelTol = 1e-12;
constexpr int kJacobiMaxSweeps = 30;

void require_same_size(const SymMatrix& a, const SymMatrix& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::InvalidArgument, "matrix size mismatch");
  }
}

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += a[i * n + j] * a[i * n + j];
    }
  }
  return std::sqrt(sum);
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(ErrorKind::InvalidArgument, "matrix is not square");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(rows[i][j])) {
        throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric");
      }
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.set(i, i, diag[i]);
  return m;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool SymMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  require_same_size(*this, other);
  SymMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + other.data_[i];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
  require_same_size(*this, other);
  SymMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - other.data_[i];
  return r;
}

SymMatrix SymMatrix::operator*(double c) const {
  SymMatrix r(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = c * data_[i];
  return r;
}

Vector SymMatrix::operator*(std::span<const double> v) const {
  if (v.size() != n_) {
    throw Error(ErrorKind::InvalidArgument, "vector length does not match matrix");
  }
  Vector out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = dot(std::span<const double>(data_.data() + i * n_, n_), v);
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::InvalidArgument, "dot product of vectors of different length");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SymMatrix SpectralDecomposition::reconstruct() const {
  const std::size_t n = size();
  SymMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        s += eigenvectors(i, k) * eigenvalues[k] * eigenvectors(j, k);
      }
      out.set(i, j, s);
    }
  }
  return out;
}

Vector SpectralDecomposition::apply_weighted(std::span<const double> weights,
                                             std::span<const double> v) const {
  const std::size_t n = size();
  if (v.size() != n || weights.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "vector length does not match decomposition");
  }
  // coeffs = diag(w) V^T v
  Vector coeffs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = eigenvectors.row(i);
    for (std::size_t k = 0; k < n; ++k) coeffs[k] += row[k] * v[i];
  }
  for (std::size_t k = 0; k < n; ++k) coeffs[k] *= weights[k];
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = dot(eigenvectors.row(i), coeffs);
  return out;
}

SpectralDecomposition eigh_sym(const SymMatrix& input) {
  if (!input.all_finite()) {
    throw Error(ErrorKind::InvalidArgument, "eigh_sym: matrix has non-finite entries");
  }
  const std::size_t n = input.size();
  std::vector<double> a(input.data().begin(), input.data().end());
  Matrix v = Matrix::identity(n);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double tol = kJacobiRelTol * std::sqrt(frob);

  int sweep = 0;
  while (off_diagonal_norm(a, n) > tol) {
    if (sweep == kJacobiMaxSweeps) {
      throw Error(ErrorKind::NumericalFailure,
                  "eigh_sym: Jacobi did not converge in " + std::to_string(kJacobiMaxSweeps) +
                      " sweeps");
    }
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          const double new_kp = c * akp - s * akq;
          const double new_kq = s * akp + c * akq;
          at(k, p) = new_kp;
          at(p, k) = new_kp;
          at(k, q) = new_kq;
          at(q, k) = new_kq;
        }
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return at(i, i) < at(j, j); });

  SpectralDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

Vector PinvFactor::apply(std::span<const double> vec) const {
  Vector weights(size(), 0.0);
  for (std::size_t k = 0; k < size(); ++k) {
    const double lambda = spectrum.eigenvalues[k];
    if (lambda > cutoff) weights[k] = 1.0 / lambda;
  }
  return spectrum.apply_weighted(weights, vec);
}

Vector PinvFactor::whiten(std::span<const double> vec) const {
  const std::size_t n = size();
  if (vec.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "vector length does not match decomposition");
  }
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = spectrum.eigenvectors.row(i);
    for (std::size_t k = 0; k < n; ++k) out[k] += row[k] * vec[i];
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = spectrum.eigenvalues[k];
    out[k] = lambda > cutoff ? out[k] / std::sqrt(lambda) : 0.0;
  }
  return out;
}

SymMatrix PinvFactor::matrix() const {
  SpectralDecomposition inverted = spectrum;
  for (double& lambda : inverted.eigenvalues) lambda = lambda > cutoff ? 1.0 / lambda : 0.0;
  return inverted.reconstruct();
}

PinvFactor pinv_psd(const SymMatrix& a, double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::InvalidArgument, "pinv tolerance must be finite and non-negative");
  }
  PinvFactor f;
  f.spectrum = eigh_sym(a);
  if (f.size() == 0) return f;
  const double lambda_max = f.spectrum.eigenvalues.back();
  const double lambda_min = f.spectrum.eigenvalues.front();
  if (lambda_min < -tau * lambda_max || (lambda_max < 0.0)) {
    throw Error(ErrorKind::NotPsd, "pinv_psd: smallest eigenvalue " + std::to_string(lambda_min) +
                                       " is below -tau * lambda_max");
  }
  f.cutoff = tau * std::max(lambda_max, 0.0);
  f.rank = static_cast<std::size_t>(
      std::count_if(f.spectrum.eigenvalues.begin(), f.spectrum.eigenvalues.end(),
                    [&](double lambda) { return lambda > f.cutoff; }));
  return f;
}

CholeskyFactor cholesky_shifted(const SymMatrix& a, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorKind::InvalidArgument, "noise variance must be positive and finite");
  }
  if (!a.all_finite()) {
    throw Error(ErrorKind::InvalidArgument, "cholesky: matrix has non-finite entries");
  }
  const std::size_t n = a.size();
  CholeskyFactor f{Matrix(n, n), sigma2};
  Matrix& l = f.lower;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j) + sigma2;
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) {
      throw Error(ErrorKind::NotSpd,
                  "cholesky: non-positive pivot at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return f;
}

Vector CholeskyFactor::whiten(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "right-hand side length does not match factor");
  }
  Vector y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

Vector CholeskyFactor::solve(std::span<const double> b) const {
  const std::size_t n = size();
  Vector y = whiten(b);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= lower(k, i) * y[k];
    y[i] /= lower(i, i);
  }
  return y;
}

Vector solve_spd(const SymMatrix& a, double sigma2, std::span<const double> b) {
  return cholesky_shifted(a, sigma2).solve(b);
}

Vector apply_factor(const PsdFactor& factor, std::span<const double> v) {
  return std::visit(
      [&](const auto& f) -> Vector {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, PinvFactor>) {
          return f.apply(v);
        } else {
          return f.solve(v);
        }
      },
      factor);
}

Vector whiten(const PsdFactor& factor, std::span<const double> v) {
  return std::visit([&](const auto& f) { return f.whiten(v); }, factor);
}

std::size_t factor_size(const PsdFactor& factor) {
  return std::visit([](const auto& f) { return f.size(); }, factor);
}

double trace_norm(const SymMatrix& a) {
  const auto spec = eigh_sym(a);
  double s = 0.0;
  for (double lambda : spec.eigenvalues) s += std::abs(lambda);
  return s;
}

double operator_norm(const SymMatrix& a) {
  const auto spec = eigh_sym(a);
  if (spec.size() == 0) return 0.0;
  return std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
}

SymMatrix psd_project(const SymMatrix& a) {
  auto spec = eigh_sym(a);
  for (double& lambda : spec.eigenvalues) lambda = std::max(lambda, 0.0);
  return spec.reconstruct();
}

}  // namespace gpcond
