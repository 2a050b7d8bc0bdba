#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace gpcond {

/// A point of the index set T, a subset of R^d.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  bool operator==(const Point&) const = default;
};

double euclidean_distance(const Point& a, const Point& b);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const Interval&) const = default;
};

/// Axis-aligned box [a_1,b_1] x ... x [a_d,b_d].
class Domain {
 public:
  explicit Domain(std::vector<Interval> bounds);
  /// One-dimensional convenience constructor.
  Domain(double lo, double hi) : Domain(std::vector<Interval>{{lo, hi}}) {}

  std::size_t dim() const noexcept { return bounds_.size(); }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }
  const Interval& bound(std::size_t i) const { return bounds_[i]; }

  bool contains(const Point& p, double slack = 0.0) const;
  bool contains(const Domain& other) const;
  Point center() const;
  /// Affine image of a unit-cube point.
  Point from_unit(std::span<const double> unit) const;

  bool operator==(const Domain&) const = default;

 private:
  std::vector<Interval> bounds_;
};

/// Radical inverse of `index` in `base`. Throws for base < 2.
double van_der_corput(std::uint64_t index, std::uint32_t base);

/// The i-th prime (0 -> 2, 1 -> 3, ...).
std::uint32_t nth_prime(std::size_t i);

/// First n points of the Halton enumeration of a box: coordinate i uses the
/// van der Corput sequence in the i-th prime base, starting at index 0.
/// Every prefix of a longer design is the shorter design.
struct NestedDesign {
  Domain domain;
  std::vector<Point> points;

  std::size_t size() const noexcept { return points.size(); }
};

NestedDesign nested_design(const Domain& domain, std::size_t n);

/// Uniform grid with `per_axis` points along every coordinate (tensor
/// product, first coordinate varying slowest). per_axis == 1 gives the center.
std::vector<Point> uniform_grid(const Domain& domain, std::size_t per_axis);

}  // namespace gpcond
