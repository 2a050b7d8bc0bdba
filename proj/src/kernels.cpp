#include "gpcond/kernels.hpp"

#include <cmath>
#include <string>

#include "gpcond/error.hpp"

namespace gpcond {

namespace {

double squared_distance(const Point& s, const Point& t) {
  if (s.dim() != t.dim()) {
    throw Error(ErrorKind::InvalidArgument, "kernel arguments have different dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double d = s[i] - t[i];
    sum += d * d;
  }
  return sum;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be positive and finite");
  }
}

struct Atom {
  double weight;
  const Point* t;
  bool derivative;
};

std::vector<Atom> atoms_of(const ObservationFunctional& f) {
  std::vector<Atom> atoms;
  std::visit(
      [&](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, ObservationFunctional::PointEval>) {
          atoms.push_back({1.0, &kind.t, false});
        } else if constexpr (std::is_same_v<T, ObservationFunctional::WeightedSum>) {
          for (const auto& term : kind.terms) atoms.push_back({term.weight, &term.t, false});
        } else {
          atoms.push_back({1.0, &kind.t, true});
        }
      },
      f.kind());
  return atoms;
}

double atom_cov(const Kernel& k, const Atom& a, const Atom& b) {
  if (!a.derivative && !b.derivative) return k(*a.t, *b.t);
  if (!k.differentiable()) {
    throw Error(ErrorKind::UnsupportedFunctional,
                std::string("derivative functional with non-differentiable kernel ") +
                    std::string(to_string(k.family())));
  }
  const double s = (*a.t)[0];
  const double t = (*b.t)[0];
  if (a.derivative && b.derivative) return k.d_both(s, t);
  if (a.derivative) return k.d_first(s, t);
  return k.d_second(s, t);
}

}  // namespace

std::string_view to_string(KernelFamily family) noexcept {
  switch (family) {
    case KernelFamily::Brownian: return "brownian";
    case KernelFamily::Rbf: return "rbf";
    case KernelFamily::Matern12: return "matern12";
    case KernelFamily::Matern32: return "matern32";
    case KernelFamily::Matern52: return "matern52";
    case KernelFamily::Linear: return "linear";
  }
  return "unknown";
}

Kernel::Kernel(KernelFamily family, double lengthscale, double variance)
    : family_(family), lengthscale_(lengthscale), variance_(variance) {}

Kernel Kernel::brownian() { return Kernel(KernelFamily::Brownian, 1.0, 1.0); }

Kernel Kernel::rbf(double lengthscale, double variance) {
  require_positive(lengthscale, "lengthscale");
  require_positive(variance, "variance");
  return Kernel(KernelFamily::Rbf, lengthscale, variance);
}

Kernel Kernel::matern12(double lengthscale, double variance) {
  require_positive(lengthscale, "lengthscale");
  require_positive(variance, "variance");
  return Kernel(KernelFamily::Matern12, lengthscale, variance);
}

Kernel Kernel::matern32(double lengthscale, double variance) {
  require_positive(lengthscale, "lengthscale");
  require_positive(variance, "variance");
  return Kernel(KernelFamily::Matern32, lengthscale, variance);
}

Kernel Kernel::matern52(double lengthscale, double variance) {
  require_positive(lengthscale, "lengthscale");
  require_positive(variance, "variance");
  return Kernel(KernelFamily::Matern52, lengthscale, variance);
}

Kernel Kernel::linear(double variance) {
  require_positive(variance, "variance");
  return Kernel(KernelFamily::Linear, 1.0, variance);
}

bool Kernel::differentiable() const noexcept {
  return family_ != KernelFamily::Brownian && family_ != KernelFamily::Matern12;
}

double Kernel::operator()(const Point& s, const Point& t) const {
  switch (family_) {
    case KernelFamily::Brownian: {
      if (s.dim() != t.dim()) {
        throw Error(ErrorKind::InvalidArgument, "kernel arguments have different dimension");
      }
      double v = 1.0;
      for (std::size_t i = 0; i < s.dim(); ++i) v *= std::min(s[i], t[i]);
      return v;
    }
    case KernelFamily::Linear: {
      if (s.dim() != t.dim()) {
        throw Error(ErrorKind::InvalidArgument, "kernel arguments have different dimension");
      }
      double v = 0.0;
      for (std::size_t i = 0; i < s.dim(); ++i) v += s[i] * t[i];
      return variance_ * v;
    }
    case KernelFamily::Rbf:
      return variance_ * std::exp(-squared_distance(s, t) / (2.0 * lengthscale_ * lengthscale_));
    case KernelFamily::Matern12:
      return variance_ * std::exp(-std::sqrt(squared_distance(s, t)) / lengthscale_);
    case KernelFamily::Matern32: {
      const double ar = std::sqrt(3.0) * std::sqrt(squared_distance(s, t)) / lengthscale_;
      return variance_ * (1.0 + ar) * std::exp(-ar);
    }
    case KernelFamily::Matern52: {
      const double ar = std::sqrt(5.0) * std::sqrt(squared_distance(s, t)) / lengthscale_;
      return variance_ * (1.0 + ar + ar * ar / 3.0) * std::exp(-ar);
    }
  }
  return 0.0;
}

// Stationary families are written in the lag tau = s - t, so
// dk/ds = kappa'(tau), dk/dt = -kappa'(tau) and d2k/dsdt = -kappa''(tau).

double Kernel::d_first(double s, double t) const {
  const double tau = s - t;
  const double r = std::abs(tau);
  const double l2 = lengthscale_ * lengthscale_;
  switch (family_) {
    case KernelFamily::Rbf:
      return -tau / l2 * variance_ * std::exp(-tau * tau / (2.0 * l2));
    case KernelFamily::Matern32: {
      const double a = std::sqrt(3.0) / lengthscale_;
      return -variance_ * a * a * tau * std::exp(-a * r);
    }
    case KernelFamily::Matern52: {
      const double a = std::sqrt(5.0) / lengthscale_;
      return -variance_ * a * a * tau * (1.0 + a * r) / 3.0 * std::exp(-a * r);
    }
    case KernelFamily::Linear:
      return variance_ * t;
    default:
      break;
  }
  throw Error(ErrorKind::UnsupportedFunctional,
              std::string(to_string(family_)) + " kernel is not differentiable");
}

double Kernel::d_second(double s, double t) const {
  if (family_ == KernelFamily::Linear) {
    return variance_ * s;
  }
  // Stationary: dk/dt(s, t) = -kappa'(s - t) = dk/ds(t, s).
  return d_first(t, s);
}

double Kernel::d_both(double s, double t) const {
  const double tau = s - t;
  const double r = std::abs(tau);
  const double l2 = lengthscale_ * lengthscale_;
  switch (family_) {
    case KernelFamily::Rbf:
      return (1.0 / l2 - tau * tau / (l2 * l2)) * variance_ * std::exp(-tau * tau / (2.0 * l2));
    case KernelFamily::Matern32: {
      const double a = std::sqrt(3.0) / lengthscale_;
      return variance_ * a * a * (1.0 - a * r) * std::exp(-a * r);
    }
    case KernelFamily::Matern52: {
      const double a = std::sqrt(5.0) / lengthscale_;
      return variance_ * a * a / 3.0 * (1.0 + a * r - a * a * r * r) * std::exp(-a * r);
    }
    case KernelFamily::Linear:
      return variance_;
    default:
      break;
  }
  throw Error(ErrorKind::UnsupportedFunctional,
              std::string(to_string(family_)) + " kernel is not differentiable");
}

double kernel_eval(const Kernel& k, const Point& s, const Point& t) { return k(s, t); }

SymMatrix gram(const Kernel& k, const std::vector<Point>& points) {
  SymMatrix g(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i; j < points.size(); ++j) {
      g.set(i, j, k(points[i], points[j]));
    }
  }
  return g;
}

MeanFunction MeanFunction::zero() { return MeanFunction(Zero{}); }

MeanFunction MeanFunction::constant(double c) {
  if (!std::isfinite(c)) {
    throw Error(ErrorKind::InvalidArgument, "constant mean must be finite");
  }
  return MeanFunction(Constant{c});
}

MeanFunction MeanFunction::callable(Fn fn, Derivative derivative) {
  if (!fn) {
    throw Error(ErrorKind::InvalidArgument, "mean callable is empty");
  }
  return MeanFunction(Callable{std::move(fn), std::move(derivative)});
}

double MeanFunction::operator()(const Point& t) const {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return m.value;
        } else {
          const double v = m.fn(t);
          if (!std::isfinite(v)) {
            throw Error(ErrorKind::InvalidArgument, "mean function returned a non-finite value");
          }
          return v;
        }
      },
      impl_);
}

std::optional<double> MeanFunction::derivative(double t) const {
  if (const auto* c = std::get_if<Callable>(&impl_)) {
    if (!c->derivative) return std::nullopt;
    return c->derivative(t);
  }
  return 0.0;
}

std::optional<double> MeanFunction::constant_value() const {
  if (std::holds_alternative<Zero>(impl_)) return 0.0;
  if (const auto* c = std::get_if<Constant>(&impl_)) return c->value;
  return std::nullopt;
}

ObservationFunctional ObservationFunctional::point(Point t) {
  return ObservationFunctional(PointEval{std::move(t)});
}

ObservationFunctional ObservationFunctional::weighted_sum(std::vector<Term> terms) {
  if (terms.empty()) {
    throw Error(ErrorKind::InvalidArgument, "weighted sum needs at least one term");
  }
  for (const auto& term : terms) {
    if (!std::isfinite(term.weight)) {
      throw Error(ErrorKind::InvalidArgument, "weighted sum has a non-finite weight");
    }
  }
  return ObservationFunctional(WeightedSum{std::move(terms)});
}

ObservationFunctional ObservationFunctional::derivative(Point t) {
  if (t.dim() != 1) {
    throw Error(ErrorKind::UnsupportedFunctional,
                "derivative functionals are only defined on one-dimensional domains");
  }
  return ObservationFunctional(DerivEval{std::move(t)});
}

std::vector<Point> ObservationFunctional::support() const {
  std::vector<Point> pts;
  for (const auto& atom : atoms_of(*this)) pts.push_back(*atom.t);
  return pts;
}

double ObservationFunctional::apply(const std::function<double(const Point&)>& f) const {
  double v = 0.0;
  for (const auto& atom : atoms_of(*this)) {
    if (atom.derivative) {
      throw Error(ErrorKind::UnsupportedFunctional,
                  "cannot apply a derivative functional to a tabulated function");
    }
    v += atom.weight * f(*atom.t);
  }
  return v;
}

double cross_cov(const Kernel& k, const ObservationFunctional& a, const ObservationFunctional& b) {
  const auto* pa = std::get_if<ObservationFunctional::PointEval>(&a.kind());
  const auto* pb = std::get_if<ObservationFunctional::PointEval>(&b.kind());
  if (pa && pb) return k(pa->t, pb->t);

  double sum = 0.0;
  const auto atoms_a = atoms_of(a);
  const auto atoms_b = atoms_of(b);
  for (const auto& x : atoms_a) {
    for (const auto& y : atoms_b) sum += x.weight * y.weight * atom_cov(k, x, y);
  }
  return sum;
}

double mean_apply(const MeanFunction& m, const ObservationFunctional& a) {
  double sum = 0.0;
  for (const auto& atom : atoms_of(a)) {
    if (atom.derivative) {
      const auto d = m.derivative((*atom.t)[0]);
      if (!d) {
        throw Error(ErrorKind::UnsupportedFunctional,
                    "derivative functional applied to a mean without a derivative");
      }
      sum += atom.weight * *d;
    } else {
      sum += atom.weight * m(*atom.t);
    }
  }
  return sum;
}

GpPrior::GpPrior(Domain d, MeanFunction m, Kernel k)
    : domain(std::move(d)), mean(std::move(m)), kernel(k) {
  if (kernel.family() == KernelFamily::Brownian) {
    for (const auto& b : domain.bounds()) {
      if (b.lo < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "Brownian kernel needs a non-negative domain");
      }
    }
  }
}

}  // namespace gpcond
