#pragma once

#include <variant>
#include <vector>

#include "gpcond/domain.hpp"
#include "gpcond/kernels.hpp"

namespace gpcond {

/// d_k(s, t) = sqrt(k(s,s) - 2 k(s,t) + k(t,t)), clamped at zero before the root.
double kernel_metric(const Kernel& k, const Point& s, const Point& t);

struct EuclideanMetric {};
struct KernelMetric {
  Kernel kernel;
};
using Metric = std::variant<EuclideanMetric, KernelMetric>;

double distance(const Metric& metric, const Point& s, const Point& t);

/// max over probe points of the distance to the nearest design point.
double fill_distance(const std::vector<Point>& design, const std::vector<Point>& probes,
                     const Metric& metric = EuclideanMetric{});

inline double fill_distance(const NestedDesign& design, const std::vector<Point>& probes,
                            const Metric& metric = EuclideanMetric{}) {
  return fill_distance(design.points, probes, metric);
}

}  // namespace gpcond
