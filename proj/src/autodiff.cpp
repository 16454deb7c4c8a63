#include "planeslope/autodiff.hpp"

#include <cmath>
#include <stdexcept>

#include "planeslope/detail/interpret.hpp"

namespace planeslope {

namespace {

// r.partials = a * x.partials + b * y.partials
DualVector combine(double value, double a, const DualVector& x, double b,
                   const DualVector& y) {
  DualVector r(value, x.partials.size());
  for (std::size_t i = 0; i < r.partials.size(); ++i)
    r.partials[i] = a * x.partials[i] + b * y.partials[i];
  return r;
}

DualVector chain(double value, double slope, const DualVector& x) {
  DualVector r(value, x.partials.size());
  for (std::size_t i = 0; i < r.partials.size(); ++i)
    r.partials[i] = slope * x.partials[i];
  return r;
}

struct DualAlgebra {
  using Scalar = DualVector;
  std::span<const double> vars;

  DualVector constant(double v) const { return DualVector(v, vars.size()); }
  DualVector variable(std::size_t i) const {
    return DualVector::seed(vars[i], vars.size(), i);
  }
  static double value(const DualVector& a) { return a.value; }
  static bool varies(const DualVector& a) {
    for (double d : a.partials)
      if (d != 0.0) return true;
    return false;
  }
  static bool finite(const DualVector& a) {
    if (!std::isfinite(a.value)) return false;
    for (double d : a.partials)
      if (!std::isfinite(d)) return false;
    return true;
  }
  static DualVector neg(const DualVector& a) { return -a; }
  static DualVector add(const DualVector& a, const DualVector& b) { return a + b; }
  static DualVector sub(const DualVector& a, const DualVector& b) { return a - b; }
  static DualVector mul(const DualVector& a, const DualVector& b) { return a * b; }
  static DualVector div(const DualVector& a, const DualVector& b) { return a / b; }

  // d(a^b) gains a^b ln(a) db when the exponent varies.
  static DualVector add_exponent_term(const DualVector& r, const DualVector& a,
                                      const DualVector& b) {
    return combine(r.value, 1.0, r, r.value * std::log(a.value), b);
  }

  static DualVector sin(const DualVector& a) {
    return chain(std::sin(a.value), std::cos(a.value), a);
  }
  static DualVector cos(const DualVector& a) {
    return chain(std::cos(a.value), -std::sin(a.value), a);
  }
  static DualVector tan(const DualVector& a) {
    const double t = std::tan(a.value);
    return chain(t, 1.0 + t * t, a);
  }
  static DualVector exp(const DualVector& a) {
    const double e = std::exp(a.value);
    return chain(e, e, a);
  }
  static DualVector ln(const DualVector& a) {
    return chain(std::log(a.value), 1.0 / a.value, a);
  }
  static DualVector sqrt(const DualVector& a) {
    const double s = std::sqrt(a.value);
    return chain(s, 0.5 / s, a);
  }
  static DualVector abs(const DualVector& a) {
    if (a.value == 0.0 && varies(a))
      throw DomainError("abs is not differentiable at 0");
    return chain(std::abs(a.value), a.value < 0.0 ? -1.0 : 1.0, a);
  }
};

}  // namespace

DualVector operator+(const DualVector& a, const DualVector& b) {
  return combine(a.value + b.value, 1.0, a, 1.0, b);
}

DualVector operator-(const DualVector& a, const DualVector& b) {
  return combine(a.value - b.value, 1.0, a, -1.0, b);
}

DualVector operator*(const DualVector& a, const DualVector& b) {
  return combine(a.value * b.value, b.value, a, a.value, b);
}

DualVector operator/(const DualVector& a, const DualVector& b) {
  const double q = a.value / b.value;
  return combine(q, 1.0 / b.value, a, -q / b.value, b);
}

DualVector operator-(const DualVector& a) { return chain(-a.value, -1.0, a); }

DualVector eval_dual(const ExprAst& ast, std::span<const double> p) {
  if (p.size() != ast.arity())
    throw std::invalid_argument("point dimension does not match field arity");
  for (double c : p)
    if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
  return detail::interpret(DualAlgebra{p}, ast.root());
}

Vec grad(const ScalarField& field, std::span<const double> p) {
  if (p.size() != field.arity())
    throw std::invalid_argument("point dimension does not match field arity");
  if (field.override_at(p))
    throw OverridePointError(
        "gradient requested at an override point; the expression does not "
        "define it there");
  return eval_dual(field.ast(), p).partials;
}

double directional(const ScalarField& field, const Point& p,
                   std::span<const double> dir) {
  if (dir.size() != field.arity())
    throw std::invalid_argument("direction dimension does not match field arity");
  double norm2 = 0.0;
  for (double d : dir) norm2 += d * d;
  if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-12))
    throw NonUnitDirection("direction must have unit norm");
  const Vec g = grad(field, p);
  double dot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * dir[i];
  return dot;
}

}  // namespace planeslope
