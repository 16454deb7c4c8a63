#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "planeslope/errors.hpp"

namespace planeslope {

using Vec = std::vector<double>;

/// A point of R^n. Coordinates are dimensionless.
struct Point {
  Vec coords;

  Point() = default;
  explicit Point(Vec c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t size() const noexcept { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }
  std::span<const double> view() const noexcept { return coords; }

  friend bool operator==(const Point&, const Point&) = default;
};

enum class UnaryOp { Neg };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs };

std::string_view function_name(Function fn) noexcept;

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Constant {
  double value;
};
struct Variable {
  std::size_t index;
};
struct Unary {
  UnaryOp op;
  ExprPtr child;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Function fn;
  std::vector<ExprPtr> args;
};

/// Immutable expression node. Subtrees are shared between trees freely.
class Expr {
 public:
  using Node = std::variant<Constant, Variable, Unary, Binary, Call>;

  explicit Expr(Node node) : node_(std::move(node)) {}
  const Node& node() const noexcept { return node_; }

 private:
  Node node_;
};

/// Expression tree over the variables 0..arity-1.
///
/// Every Variable index is below arity and every Call has exactly one
/// argument; both are checked on construction.
class ExprAst {
 public:
  ExprAst(std::size_t arity, ExprPtr root);

  std::size_t arity() const noexcept { return arity_; }
  const Expr& root() const noexcept { return *root_; }
  const ExprPtr& root_ptr() const noexcept { return root_; }

  static ExprAst constant(std::size_t arity, double value);
  static ExprAst variable(std::size_t arity, std::size_t index);

 private:
  std::size_t arity_;
  ExprPtr root_;
};

ExprAst operator+(const ExprAst& a, const ExprAst& b);
ExprAst operator-(const ExprAst& a, const ExprAst& b);
ExprAst operator*(const ExprAst& a, const ExprAst& b);
ExprAst operator/(const ExprAst& a, const ExprAst& b);
ExprAst operator-(const ExprAst& a);
ExprAst operator*(double k, const ExprAst& a);
ExprAst pow(const ExprAst& base, const ExprAst& exponent);
ExprAst call(Function fn, const ExprAst& arg);

/// Parses an expression over n variables.
///
/// Variables are x1..xn for any n; for n <= 3 the aliases x, y, z name the
/// first three. Grammar (whitespace-insensitive):
///
///   expr    = term { ("+" | "-") term }
///   term    = unary { ("*" | "/") unary }
///   unary   = ("-" | "+") unary | power
///   power   = primary [ "^" exponent ]
///   exponent= ("-" | "+") exponent | power
///   primary = number | name | name "(" expr { "," expr } ")" | "(" expr ")"
///
/// Throws SyntaxError, UnknownIdentifier or ArityError.
ExprAst parse(std::string_view text, std::size_t arity);

/// Fully parenthesized text that parses back to an equivalent tree.
std::string print(const ExprAst& ast);

std::set<std::size_t> free_vars(const ExprAst& ast);

/// Parsed expression plus exact point-value overrides (piecewise clauses such
/// as f(0,0) = 0).
class ScalarField {
 public:
  explicit ScalarField(ExprAst ast);
  ScalarField(std::string_view text, std::size_t arity);

  std::size_t arity() const noexcept { return ast_.arity(); }
  const ExprAst& ast() const noexcept { return ast_; }
  const std::vector<std::pair<Point, double>>& overrides() const noexcept {
    return overrides_;
  }

  /// Adds f(p) = value. Throws std::invalid_argument on a duplicate point or a
  /// dimension mismatch.
  ScalarField& add_override(Point p, double value);

  /// Override value at p, when p is an override key (exact equality).
  const double* override_at(std::span<const double> p) const noexcept;

 private:
  ExprAst ast_;
  std::vector<std::pair<Point, double>> overrides_;
};

/// f(p); override keys return their value, otherwise the tree is evaluated
/// and any non-finite or undefined intermediate raises DomainError.
double eval(const ScalarField& field, std::span<const double> p);
inline double eval(const ScalarField& field, const Point& p) {
  return eval(field, p.view());
}

/// Evaluates the tree alone, ignoring overrides.
double eval_ast(const ExprAst& ast, std::span<const double> p);

}  // namespace planeslope
