#include "gpcond/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "gpcond/error.hpp"

namespace gpcond {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail(std::size_t line, std::string_view key, const std::string& msg) {
  std::string where = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
  throw Error(ErrorKind::Config, where + "'" + std::string(key) + "' " + msg);
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::uint64_t> to_u64(std::string_view s) {
  if (s.empty() || s.front() == '-' || s.front() == '+') return std::nullopt;
  const std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(buf.c_str(), &end, 10);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

struct Entry {
  std::string value;
  std::size_t line;
};

const char* const kKnownKeys[] = {
    "command",     "kernel",          "lengthscale",   "variance",          "mean",
    "mean_value",  "domain",          "region_s",      "observations",      "observations_file",
    "schedule",    "test_grid_size",  "noise_variance", "pinv_tol",         "seed",
    "output_path", "mean_tol",        "cov_tol",       "sample_count",      "observable",
    "observable_frequency",
};

bool known_key(std::string_view key) {
  for (const char* k : kKnownKeys) {
    if (key == k) return true;
  }
  return false;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry, std::less<>> entries) : entries_(std::move(entries)) {}

  bool has(std::string_view key) const { return entries_.find(key) != entries_.end(); }
  std::size_t line(std::string_view key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }
  const std::string& raw(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw Error(ErrorKind::Config, "missing required key '" + std::string(key) + "'");
    }
    return it->second.value;
  }

  double real(std::string_view key) const {
    const auto v = to_double(raw(key));
    if (!v) fail(line(key), key, "expects a finite real number, got '" + raw(key) + "'");
    return *v;
  }
  double real_or(std::string_view key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }
  std::uint64_t integer(std::string_view key) const {
    const auto v = to_u64(raw(key));
    if (!v) fail(line(key), key, "expects a non-negative integer, got '" + raw(key) + "'");
    return *v;
  }
  std::vector<double> reals(std::string_view key) const {
    std::vector<double> out;
    for (auto part : split(raw(key), ',')) {
      const auto v = to_double(part);
      if (!v) fail(line(key), key, "has a non-numeric list entry '" + std::string(part) + "'");
      out.push_back(*v);
    }
    return out;
  }
  std::vector<std::size_t> integers(std::string_view key) const {
    std::vector<std::size_t> out;
    for (auto part : split(raw(key), ',')) {
      const auto v = to_u64(part);
      if (!v) fail(line(key), key, "has a non-integer list entry '" + std::string(part) + "'");
      out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
  }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

Domain parse_box(const Reader& r, std::string_view key) {
  const auto xs = r.reals(key);
  if (xs.empty() || xs.size() % 2 != 0) {
    fail(r.line(key), key, "expects lo,hi pairs, one per dimension");
  }
  std::vector<Interval> bounds;
  for (std::size_t i = 0; i < xs.size(); i += 2) {
    if (xs[i] > xs[i + 1]) fail(r.line(key), key, "has a lower bound above its upper bound");
    bounds.push_back({xs[i], xs[i + 1]});
  }
  return Domain(std::move(bounds));
}

Kernel parse_kernel(const Reader& r) {
  const std::string& name = r.raw("kernel");
  const double variance = r.real_or("variance", 1.0);
  if (!(variance > 0.0)) fail(r.line("variance"), "variance", "must be positive");
  auto lengthscale = [&] {
    const double l = r.real("lengthscale");
    if (!(l > 0.0)) fail(r.line("lengthscale"), "lengthscale", "must be positive");
    return l;
  };
  if (name == "brownian") return Kernel::brownian();
  if (name == "linear") return Kernel::linear(variance);
  if (name == "rbf") return Kernel::rbf(lengthscale(), variance);
  if (name == "matern12") return Kernel::matern12(lengthscale(), variance);
  if (name == "matern32") return Kernel::matern32(lengthscale(), variance);
  if (name == "matern52") return Kernel::matern52(lengthscale(), variance);
  fail(r.line("kernel"), "kernel", "names an unknown kernel '" + name + "'");
}

void read_observation_file(const std::filesystem::path& path, std::size_t dim,
                           ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open observations_file '" + path.string() + "'");
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    std::vector<double> xs;
    for (auto part : split(body, ',')) {
      const auto v = to_double(part);
      if (!v) {
        throw Error(ErrorKind::Config, path.string() + " line " + std::to_string(lineno) +
                                           ": non-numeric entry '" + std::string(part) + "'");
      }
      xs.push_back(*v);
    }
    if (xs.size() != dim + 1) {
      throw Error(ErrorKind::Config, path.string() + " line " + std::to_string(lineno) +
                                         ": expected " + std::to_string(dim + 1) + " columns");
    }
    const double y = xs.back();
    xs.pop_back();
    cfg.functionals.push_back(ObservationFunctional::point(Point(std::move(xs))));
    cfg.values.push_back(y);
  }
}

}  // namespace

std::pair<ObservationFunctional, double> parse_observation(std::string_view entry) {
  entry = trim(entry);
  const auto colon = entry.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::Config, "observation '" + std::string(entry) + "' needs the form t:y");
  }
  auto where = trim(entry.substr(0, colon));
  const auto y = to_double(trim(entry.substr(colon + 1)));
  bool derivative = false;
  if (!where.empty() && where.front() == 'd') {
    derivative = true;
    where = trim(where.substr(1));
  }
  std::vector<double> coords;
  std::istringstream in{std::string(where)};
  std::string tok;
  while (in >> tok) {
    const auto v = to_double(tok);
    if (!v) {
      throw Error(ErrorKind::Config, "observation '" + std::string(entry) + "' has a bad coordinate");
    }
    coords.push_back(*v);
  }
  if (!y || coords.empty()) {
    throw Error(ErrorKind::Config, "observation '" + std::string(entry) + "' is malformed");
  }
  Point t(std::move(coords));
  return {derivative ? ObservationFunctional::derivative(std::move(t))
                     : ObservationFunctional::point(std::move(t)),
          *y};
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::map<std::string, Entry, std::less<>> entries;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++lineno;

    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config,
                  "line " + std::to_string(lineno) + ": expected 'key = value', got '" +
                      std::string(line) + "'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorKind::Config, "line " + std::to_string(lineno) + ": empty key");
    }
    if (!known_key(key)) fail(lineno, key, "is not a known key");
    if (value.empty()) fail(lineno, key, "has an empty value");
    if (entries.count(key) != 0) fail(lineno, key, "is given more than once");
    entries.emplace(std::string(key), Entry{std::string(value), lineno});
  }

  const Reader r(std::move(entries));
  ExperimentConfig cfg;

  // Value-level checks that do not depend on other keys come first so the
  // error names the offending line rather than a missing key elsewhere.
  if (r.has("kernel")) cfg.kernel = parse_kernel(r);
  if (r.has("schedule")) {
    cfg.schedule = r.integers("schedule");
    for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
      if (cfg.schedule[i] < 1) fail(r.line("schedule"), "schedule", "entries must be >= 1");
      if (i > 0 && cfg.schedule[i] <= cfg.schedule[i - 1]) {
        fail(r.line("schedule"), "schedule", "must be strictly increasing");
      }
    }
  }

  const std::string& command = r.raw("command");
  if (command == "condition") {
    cfg.command = Command::Condition;
  } else if (command == "refine") {
    cfg.command = Command::Refine;
  } else if (command == "contract") {
    cfg.command = Command::Contract;
  } else if (command == "sample") {
    cfg.command = Command::Sample;
  } else {
    fail(r.line("command"), "command", "must be one of condition, refine, contract, sample");
  }
  if (!r.has("kernel")) r.raw("kernel");

  cfg.domain = parse_box(r, "domain");
  cfg.region = r.has("region_s") ? parse_box(r, "region_s") : cfg.domain;
  if (!cfg.domain.contains(cfg.region)) {
    fail(r.line("region_s"), "region_s", "must lie inside the domain");
  }
  if (cfg.kernel.family() == KernelFamily::Brownian) {
    for (const auto& b : cfg.domain.bounds()) {
      if (b.lo < 0.0) fail(r.line("domain"), "domain", "must be non-negative for the brownian kernel");
    }
  }

  if (r.has("mean")) {
    const std::string& m = r.raw("mean");
    if (m == "zero") {
      cfg.mean = MeanFunction::zero();
    } else if (m == "constant") {
      cfg.mean = MeanFunction::constant(r.real("mean_value"));
    } else {
      fail(r.line("mean"), "mean", "must be zero or constant");
    }
  } else if (r.has("mean_value")) {
    fail(r.line("mean_value"), "mean_value", "requires mean = constant");
  }

  if (r.has("observations")) {
    for (auto part : split(r.raw("observations"), ',')) {
      try {
        auto [f, y] = parse_observation(part);
        for (const auto& p : f.support()) {
          if (p.dim() != cfg.domain.dim() || !cfg.domain.contains(p)) {
            fail(r.line("observations"), "observations",
                 "has a point outside the domain: '" + std::string(part) + "'");
          }
        }
        if (f.is_derivative() && !cfg.kernel.differentiable()) {
          fail(r.line("observations"), "observations",
               "uses a derivative with a non-differentiable kernel");
        }
        cfg.functionals.push_back(std::move(f));
        cfg.values.push_back(y);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config &&
            std::string_view(e.what()).find("line ") != std::string_view::npos) {
          throw;
        }
        fail(r.line("observations"), "observations", e.what());
      }
    }
  }
  if (r.has("observations_file")) {
    std::filesystem::path p = r.raw("observations_file");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    read_observation_file(p, cfg.domain.dim(), cfg);
  }

  if (r.has("test_grid_size")) {
    cfg.test_grid_size = static_cast<std::size_t>(r.integer("test_grid_size"));
    if (cfg.test_grid_size < 1) fail(r.line("test_grid_size"), "test_grid_size", "must be >= 1");
  }
  cfg.noise_variance = r.real_or("noise_variance", 0.0);
  if (cfg.noise_variance < 0.0) fail(r.line("noise_variance"), "noise_variance", "must be >= 0");
  cfg.pinv_tol = r.real_or("pinv_tol", kDefaultPinvTol);
  if (cfg.pinv_tol < 0.0) fail(r.line("pinv_tol"), "pinv_tol", "must be >= 0");
  if (r.has("seed")) cfg.seed = r.integer("seed");
  if (r.has("output_path")) cfg.output_path = r.raw("output_path");
  cfg.mean_tol = r.real_or("mean_tol", cfg.mean_tol);
  cfg.cov_tol = r.real_or("cov_tol", cfg.cov_tol);
  if (cfg.mean_tol < 0.0) fail(r.line("mean_tol"), "mean_tol", "must be >= 0");
  if (cfg.cov_tol < 0.0) fail(r.line("cov_tol"), "cov_tol", "must be >= 0");
  if (r.has("sample_count")) {
    cfg.sample_count = static_cast<std::size_t>(r.integer("sample_count"));
    if (cfg.sample_count < 1) fail(r.line("sample_count"), "sample_count", "must be >= 1");
  }
  if (r.has("observable")) {
    const std::string& o = r.raw("observable");
    if (o == "mean") {
      cfg.observable = ObservableKind::Mean;
    } else if (o == "sine") {
      cfg.observable = ObservableKind::Sine;
    } else if (o == "sample") {
      cfg.observable = ObservableKind::Sample;
    } else {
      fail(r.line("observable"), "observable", "must be mean, sine or sample");
    }
  }
  cfg.observable_frequency = r.real_or("observable_frequency", 1.0);

  switch (cfg.command) {
    case Command::Condition:
      if (!r.has("observations") && !r.has("observations_file")) {
        throw Error(ErrorKind::Config,
                    "missing required key 'observations' (or 'observations_file') for condition");
      }
      break;
    case Command::Refine:
    case Command::Contract:
      if (!r.has("schedule")) {
        throw Error(ErrorKind::Config, "missing required key 'schedule' for " + command);
      }
      break;
    case Command::Sample:
      break;
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

}  // namespace gpcond
