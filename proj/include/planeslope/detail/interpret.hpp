#pragma once

// Tree-walking interpreter shared by plain evaluation and dual-number
// propagation. An Algebra supplies the scalar type and its primitive
// operations; domain checks and the power case split live here so that the
// value and derivative channels always take the same branch.

#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>

#include "planeslope/errors.hpp"
#include "planeslope/expr.hpp"

namespace planeslope::detail {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// Exponents up to this magnitude are treated as integers and expanded by
// repeated multiplication.
inline constexpr double kMaxIntegerExponent = 1u << 30;

inline bool integral_exponent(double b) {
  return std::abs(b) <= kMaxIntegerExponent && std::nearbyint(b) == b;
}

template <class Algebra>
typename Algebra::Scalar integer_power(const Algebra& alg,
                                       const typename Algebra::Scalar& base,
                                       std::int64_t n) {
  using S = typename Algebra::Scalar;
  const bool invert = n < 0;
  std::uint64_t e = invert ? static_cast<std::uint64_t>(-n)
                           : static_cast<std::uint64_t>(n);
  S result = alg.constant(1.0);
  S factor = base;
  while (e != 0) {
    if (e & 1u) result = alg.mul(result, factor);
    e >>= 1u;
    if (e != 0) factor = alg.mul(factor, factor);
  }
  if (invert) {
    if (alg.value(result) == 0.0)
      throw DomainError("division by zero in negative integer power");
    result = alg.div(alg.constant(1.0), result);
  }
  return result;
}

template <class Algebra>
typename Algebra::Scalar interpret(const Algebra& alg, const Expr& e) {
  using S = typename Algebra::Scalar;
  auto checked = [&](S r) {
    if (!alg.finite(r)) throw DomainError("non-finite intermediate value");
    return r;
  };
  return std::visit(
      overloaded{
          [&](const Constant& c) -> S { return alg.constant(c.value); },
          [&](const Variable& v) -> S { return alg.variable(v.index); },
          [&](const Unary& u) -> S {
            return checked(alg.neg(interpret(alg, *u.child)));
          },
          [&](const Binary& b) -> S {
            S lhs = interpret(alg, *b.lhs);
            S rhs = interpret(alg, *b.rhs);
            switch (b.op) {
              case BinaryOp::Add:
                return checked(alg.add(lhs, rhs));
              case BinaryOp::Sub:
                return checked(alg.sub(lhs, rhs));
              case BinaryOp::Mul:
                return checked(alg.mul(lhs, rhs));
              case BinaryOp::Div:
                if (alg.value(rhs) == 0.0)
                  throw DomainError("division by zero");
                return checked(alg.div(lhs, rhs));
              case BinaryOp::Pow: {
                const double a = alg.value(lhs);
                const double x = alg.value(rhs);
                if (integral_exponent(x)) {
                  S r = integer_power(alg, lhs, static_cast<std::int64_t>(x));
                  if (alg.varies(rhs)) {
                    if (a <= 0.0)
                      throw DomainError(
                          "variable exponent of a non-positive base");
                    r = alg.add_exponent_term(r, lhs, rhs);
                  }
                  return checked(r);
                }
                if (a > 0.0) return checked(alg.exp(alg.mul(rhs, alg.ln(lhs))));
                throw DomainError("non-integer power of a non-positive base");
              }
            }
            throw Error("unknown binary operator");
          },
          [&](const Call& c) -> S {
            S arg = interpret(alg, *c.args.front());
            const double a = alg.value(arg);
            switch (c.fn) {
              case Function::Sin:
                return checked(alg.sin(arg));
              case Function::Cos:
                return checked(alg.cos(arg));
              case Function::Tan:
                return checked(alg.tan(arg));
              case Function::Exp:
                return checked(alg.exp(arg));
              case Function::Ln:
                if (a <= 0.0) throw DomainError("ln of a non-positive value");
                return checked(alg.ln(arg));
              case Function::Sqrt:
                if (a < 0.0) throw DomainError("sqrt of a negative value");
                return checked(alg.sqrt(arg));
              case Function::Abs:
                return checked(alg.abs(arg));
            }
            throw Error("unknown function");
          },
      },
      e.node());
}

}  // namespace planeslope::detail
