#include "gpcond/csv.hpp"

#include <cstdio>
#include <sstream>

namespace gpcond {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::string point_label(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i > 0) s += ' ';
    s += format_real(p[i]);
  }
  return s;
}

}  // namespace

std::string convergence_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "n,sup_mean_delta,trace_cov_delta,posterior_trace,char_delta_max,sup_mean_err_vs_truth\n";
  for (const auto& level : report.levels) {
    out << level.n << ',' << optional_cell(level.sup_mean_delta) << ','
        << optional_cell(level.trace_cov_delta) << ',' << format_real(level.posterior_trace) << ','
        << (level.char_deltas.empty() ? std::string() : format_real(level.char_delta_max())) << ','
        << optional_cell(level.sup_mean_err_vs_truth) << '\n';
  }
  return out.str();
}

std::string pointwise_csv(const std::vector<Point>& grid, const Vector& mean, const Vector& var) {
  std::ostringstream out;
  const std::size_t d = grid.empty() ? 1 : grid.front().dim();
  if (d == 1) {
    out << 't';
  } else {
    for (std::size_t i = 0; i < d; ++i) out << (i ? ",t" : "t") << i;
  }
  out << ",posterior_mean,posterior_var\n";
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t i = 0; i < grid[r].dim(); ++i) out << format_real(grid[r][i]) << ',';
    out << format_real(mean[r]) << ',' << format_real(var[r]) << '\n';
  }
  return out.str();
}

std::string paths_csv(const PathSample& sample) {
  std::ostringstream out;
  for (std::size_t i = 0; i < sample.grid.size(); ++i) {
    out << (i ? "," : "") << point_label(sample.grid[i]);
  }
  out << '\n';
  for (std::size_t r = 0; r < sample.count(); ++r) {
    const auto row = sample.values.row(r);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_real(row[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace gpcond
