#include "gpcond/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gpcond/error.hpp"

namespace gpcond {

double kernel_metric(const Kernel& k, const Point& s, const Point& t) {
  if (s == t) return 0.0;
  // Only commutative sums, so d(s,t) == d(t,s) bit-for-bit.
  const double cross = k(s, t) + k(t, s);
  const double sq = (k(s, s) + k(t, t)) - cross;
  return std::sqrt(std::max(0.0, sq));
}

double distance(const Metric& metric, const Point& s, const Point& t) {
  if (const auto* km = std::get_if<KernelMetric>(&metric)) {
    return kernel_metric(km->kernel, s, t);
  }
  return euclidean_distance(s, t);
}

double fill_distance(const std::vector<Point>& design, const std::vector<Point>& probes,
                     const Metric& metric) {
  if (design.empty()) {
    throw Error(ErrorKind::InvalidArgument, "fill distance of an empty design");
  }
  if (probes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "fill distance needs a non-empty probe grid");
  }
  double worst = 0.0;
  for (const auto& p : probes) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& s : design) nearest = std::min(nearest, distance(metric, p, s));
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace gpcond
