#include "gpcond/domain.hpp"

#include <cmath>
#include <string>

#include "gpcond/error.hpp"

namespace gpcond {

double euclidean_distance(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::InvalidArgument, "points of different dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Domain::Domain(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  if (bounds_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "domain needs at least one dimension");
  }
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    const auto& b = bounds_[i];
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
      throw Error(ErrorKind::InvalidArgument,
                  "invalid bounds for coordinate " + std::to_string(i));
    }
  }
}

bool Domain::contains(const Point& p, double slack) const {
  if (p.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(p[i])) return false;
    if (p[i] < bounds_[i].lo - slack || p[i] > bounds_[i].hi + slack) return false;
  }
  return true;
}

bool Domain::contains(const Domain& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.bounds_[i].lo < bounds_[i].lo || other.bounds_[i].hi > bounds_[i].hi) {
      return false;
    }
  }
  return true;
}

Point Domain::center() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    c[i] = 0.5 * (bounds_[i].lo + bounds_[i].hi);
  }
  return Point(std::move(c));
}

Point Domain::from_unit(std::span<const double> unit) const {
  if (unit.size() != dim()) {
    throw Error(ErrorKind::InvalidArgument, "unit point has wrong dimension");
  }
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto& b = bounds_[i];
    c[i] = b.lo + (b.hi - b.lo) * unit[i];
  }
  return Point(std::move(c));
}

double van_der_corput(std::uint64_t index, std::uint32_t base) {
  if (base < 2) {
    throw Error(ErrorKind::InvalidArgument, "van der Corput base must be >= 2");
  }
  // In base 2 every term is a power of two times a digit, so the sum is exact.
  const double inv_base = 1.0 / static_cast<double>(base);
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

std::uint32_t nth_prime(std::size_t i) {
  static thread_local std::vector<std::uint32_t> primes{2};
  std::uint32_t candidate = primes.back();
  while (primes.size() <= i) {
    ++candidate;
    bool prime = true;
    for (std::uint32_t p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes[i];
}

NestedDesign nested_design(const Domain& domain, std::size_t n) {
  if (n < 1) {
    throw Error(ErrorKind::InvalidArgument, "nested design needs n >= 1");
  }
  NestedDesign design{domain, {}};
  design.points.reserve(n);
  std::vector<double> unit(domain.dim());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < domain.dim(); ++i) {
      unit[i] = van_der_corput(k, nth_prime(i));
    }
    design.points.push_back(domain.from_unit(unit));
  }
  return design;
}

std::vector<Point> uniform_grid(const Domain& domain, std::size_t per_axis) {
  if (per_axis == 0) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least one point per axis");
  }
  const std::size_t d = domain.dim();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;

  std::vector<Point> grid;
  grid.reserve(total);
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> unit(d);
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      unit[i] = per_axis == 1 ? 0.5
                              : static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
    }
    Point p = domain.from_unit(unit);
    // Pin the upper endpoint exactly; b.lo + (b.hi - b.lo) can round.
    for (std::size_t i = 0; i < d; ++i) {
      if (per_axis > 1 && idx[i] == per_axis - 1) p.coords[i] = domain.bound(i).hi;
    }
    grid.push_back(std::move(p));
    for (std::size_t i = d; i-- > 0;) {
      if (++idx[i] < per_axis) break;
      idx[i] = 0;
    }
  }
  return grid;
}

}  // namespace gpcond
