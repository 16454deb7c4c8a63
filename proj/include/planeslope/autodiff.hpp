#pragma once

#include <cstddef>
#include <span>

#include "planeslope/expr.hpp"

namespace planeslope {

/// Forward-mode dual number carrying a value and n partial derivatives.
struct DualVector {
  double value = 0.0;
  Vec partials;

  DualVector() = default;
  DualVector(double v, std::size_t n) : value(v), partials(n, 0.0) {}
  DualVector(double v, Vec d) : value(v), partials(std::move(d)) {}

  /// The i-th coordinate variable seeded with a unit partial.
  static DualVector seed(double v, std::size_t n, std::size_t i) {
    DualVector d(v, n);
    d.partials[i] = 1.0;
    return d;
  }
};

DualVector operator+(const DualVector& a, const DualVector& b);
DualVector operator-(const DualVector& a, const DualVector& b);
DualVector operator*(const DualVector& a, const DualVector& b);
DualVector operator/(const DualVector& a, const DualVector& b);
DualVector operator-(const DualVector& a);

/// Value and gradient of the tree at p in one vector-dual pass.
DualVector eval_dual(const ExprAst& ast, std::span<const double> p);

/// Exact gradient of the field's expression at p.
///
/// Throws OverridePointError when p is an override key, DomainError when the
/// expression or its derivative is undefined at p.
Vec grad(const ScalarField& field, std::span<const double> p);
inline Vec grad(const ScalarField& field, const Point& p) {
  return grad(field, p.view());
}

/// grad(field, p) . dir for a unit direction (norm within 1e-12 of 1).
double directional(const ScalarField& field, const Point& p,
                   std::span<const double> dir);

}  // namespace planeslope
