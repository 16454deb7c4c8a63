#include "planeslope/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>

#include "planeslope/detail/interpret.hpp"

namespace planeslope {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 7> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
}};

ExprPtr make(Expr::Node node) {
  return std::make_shared<const Expr>(std::move(node));
}

void validate(const Expr& e, std::size_t arity) {
  std::visit(detail::overloaded{
                 [](const Constant&) {},
                 [&](const Variable& v) {
                   if (v.index >= arity)
                     throw std::invalid_argument(
                         "variable index exceeds field arity");
                 },
                 [&](const Unary& u) { validate(*u.child, arity); },
                 [&](const Binary& b) {
                   validate(*b.lhs, arity);
                   validate(*b.rhs, arity);
                 },
                 [&](const Call& c) {
                   if (c.args.size() != 1)
                     throw ArityError(std::string(function_name(c.fn)) +
                                      " takes exactly one argument");
                   validate(*c.args.front(), arity);
                 },
             },
             e.node());
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t arity)
      : text_(text), arity_(arity) {}

  ExprPtr parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("empty expression", pos_);
    ExprPtr e = expr();
    skip_space();
    if (pos_ != text_.size())
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, std::size_t opened_at) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw SyntaxError(std::string("unclosed '(', expected '") + c + "'",
                          opened_at);
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Binary{BinaryOp::Add, lhs, term()});
      else if (accept('-'))
        lhs = make(Binary{BinaryOp::Sub, lhs, term()});
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Binary{BinaryOp::Mul, lhs, unary()});
      else if (accept('/'))
        lhs = make(Binary{BinaryOp::Div, lhs, unary()});
      else
        return lhs;
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make(Unary{UnaryOp::Neg, unary()});
    if (accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (accept('^')) return make(Binary{BinaryOp::Pow, base, exponent()});
    return base;
  }

  ExprPtr exponent() {
    if (accept('-')) return make(Unary{UnaryOp::Neg, exponent()});
    if (accept('+')) return exponent();
    return power();
  }

  ExprPtr primary() {
    skip_space();
    if (pos_ >= text_.size())
      throw SyntaxError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t opened = pos_++;
      ExprPtr inner = expr();
      expect(')', opened);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[p])))
          ++p;
        pos_ = p;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      throw SyntaxError("malformed number", start);
    return make(Constant{value});
  }

  ExprPtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);

    for (const auto& [fname, fn] : kFunctions) {
      if (fname != id) continue;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '(')
        throw SyntaxError("expected '(' after function name", pos_);
      const std::size_t opened = pos_++;
      std::vector<ExprPtr> args;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
        expect(')', opened);
      }
      if (args.size() != 1)
        throw ArityError(std::string(id) + " takes exactly one argument, got " +
                         std::to_string(args.size()));
      return make(Call{fn, std::move(args)});
    }

    if (auto index = variable_index(id)) return make(Variable{*index});
    throw UnknownIdentifier(std::string(id), start);
  }

  std::optional<std::size_t> variable_index(std::string_view id) const {
    if (arity_ <= 3 && id.size() == 1) {
      const std::size_t i = id[0] == 'x' ? 0 : id[0] == 'y' ? 1 : id[0] == 'z' ? 2 : 3;
      if (i < arity_) return i;
      return std::nullopt;
    }
    if (id.size() >= 2 && id[0] == 'x' && id[1] != '0') {
      std::size_t k = 0;
      auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
      if (ec == std::errc() && ptr == id.data() + id.size() && k >= 1 &&
          k <= arity_)
        return k - 1;
    }
    return std::nullopt;
  }

  std::string_view text_;
  std::size_t arity_;
  std::size_t pos_ = 0;
};

void print_into(const Expr& e, std::string& out) {
  std::visit(
      detail::overloaded{
          [&](const Constant& c) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", std::abs(c.value));
            if (std::signbit(c.value)) {
              out += "(-";
              out += buf;
              out += ')';
            } else {
              out += buf;
            }
          },
          [&](const Variable& v) { out += "x" + std::to_string(v.index + 1); },
          [&](const Unary& u) {
            out += "(-";
            print_into(*u.child, out);
            out += ')';
          },
          [&](const Binary& b) {
            static constexpr char kOps[] = {'+', '-', '*', '/', '^'};
            out += '(';
            print_into(*b.lhs, out);
            out += kOps[static_cast<int>(b.op)];
            print_into(*b.rhs, out);
            out += ')';
          },
          [&](const Call& c) {
            out += function_name(c.fn);
            out += '(';
            for (std::size_t i = 0; i < c.args.size(); ++i) {
              if (i) out += ',';
              print_into(*c.args[i], out);
            }
            out += ')';
          },
      },
      e.node());
}

void collect_vars(const Expr& e, std::set<std::size_t>& out) {
  std::visit(detail::overloaded{
                 [](const Constant&) {},
                 [&](const Variable& v) { out.insert(v.index); },
                 [&](const Unary& u) { collect_vars(*u.child, out); },
                 [&](const Binary& b) {
                   collect_vars(*b.lhs, out);
                   collect_vars(*b.rhs, out);
                 },
                 [&](const Call& c) {
                   for (const auto& a : c.args) collect_vars(*a, out);
                 },
             },
             e.node());
}

struct RealAlgebra {
  using Scalar = double;
  std::span<const double> vars;

  double constant(double v) const { return v; }
  double variable(std::size_t i) const { return vars[i]; }
  static double value(double a) { return a; }
  static bool varies(double) { return false; }
  static bool finite(double a) { return std::isfinite(a); }
  static double neg(double a) { return -a; }
  static double add(double a, double b) { return a + b; }
  static double sub(double a, double b) { return a - b; }
  static double mul(double a, double b) { return a * b; }
  static double div(double a, double b) { return a / b; }
  static double add_exponent_term(double r, double, double) { return r; }
  static double sin(double a) { return std::sin(a); }
  static double cos(double a) { return std::cos(a); }
  static double tan(double a) { return std::tan(a); }
  static double exp(double a) { return std::exp(a); }
  static double ln(double a) { return std::log(a); }
  static double sqrt(double a) { return std::sqrt(a); }
  static double abs(double a) { return std::abs(a); }
};

ExprAst combine(BinaryOp op, const ExprAst& a, const ExprAst& b) {
  if (a.arity() != b.arity())
    throw std::invalid_argument("cannot combine expressions of different arity");
  return ExprAst(a.arity(), make(Binary{op, a.root_ptr(), b.root_ptr()}));
}

}  // namespace

std::string_view function_name(Function fn) noexcept {
  for (const auto& [name, f] : kFunctions)
    if (f == fn) return name;
  return "?";
}

ExprAst::ExprAst(std::size_t arity, ExprPtr root)
    : arity_(arity), root_(std::move(root)) {
  if (arity_ == 0) throw std::invalid_argument("arity must be positive");
  if (!root_) throw std::invalid_argument("null expression");
  validate(*root_, arity_);
}

ExprAst ExprAst::constant(std::size_t arity, double value) {
  return ExprAst(arity, make(Constant{value}));
}

ExprAst ExprAst::variable(std::size_t arity, std::size_t index) {
  return ExprAst(arity, make(Variable{index}));
}

ExprAst operator+(const ExprAst& a, const ExprAst& b) {
  return combine(BinaryOp::Add, a, b);
}
ExprAst operator-(const ExprAst& a, const ExprAst& b) {
  return combine(BinaryOp::Sub, a, b);
}
ExprAst operator*(const ExprAst& a, const ExprAst& b) {
  return combine(BinaryOp::Mul, a, b);
}
ExprAst operator/(const ExprAst& a, const ExprAst& b) {
  return combine(BinaryOp::Div, a, b);
}
ExprAst operator-(const ExprAst& a) {
  return ExprAst(a.arity(), make(Unary{UnaryOp::Neg, a.root_ptr()}));
}
ExprAst operator*(double k, const ExprAst& a) {
  return ExprAst::constant(a.arity(), k) * a;
}
ExprAst pow(const ExprAst& base, const ExprAst& exponent) {
  return combine(BinaryOp::Pow, base, exponent);
}
ExprAst call(Function fn, const ExprAst& arg) {
  return ExprAst(arg.arity(), make(Call{fn, {arg.root_ptr()}}));
}

ExprAst parse(std::string_view text, std::size_t arity) {
  if (arity == 0) throw std::invalid_argument("arity must be positive");
  return ExprAst(arity, Parser(text, arity).parse_all());
}

std::string print(const ExprAst& ast) {
  std::string out;
  print_into(ast.root(), out);
  return out;
}

std::set<std::size_t> free_vars(const ExprAst& ast) {
  std::set<std::size_t> out;
  collect_vars(ast.root(), out);
  return out;
}

ScalarField::ScalarField(ExprAst ast) : ast_(std::move(ast)) {}

ScalarField::ScalarField(std::string_view text, std::size_t arity)
    : ast_(parse(text, arity)) {}

ScalarField& ScalarField::add_override(Point p, double value) {
  if (p.size() != arity())
    throw std::invalid_argument("override point has the wrong dimension");
  if (!std::isfinite(value))
    throw std::invalid_argument("override value must be finite");
  if (override_at(p.view()))
    throw std::invalid_argument("duplicate override point");
  overrides_.emplace_back(std::move(p), value);
  return *this;
}

const double* ScalarField::override_at(
    std::span<const double> p) const noexcept {
  for (const auto& [key, value] : overrides_) {
    bool equal = key.size() == p.size();
    for (std::size_t i = 0; equal && i < p.size(); ++i) equal = key[i] == p[i];
    if (equal) return &value;
  }
  return nullptr;
}

double eval_ast(const ExprAst& ast, std::span<const double> p) {
  if (p.size() != ast.arity())
    throw std::invalid_argument("point dimension does not match field arity");
  for (double c : p)
    if (!std::isfinite(c)) throw DomainError("non-finite coordinate");
  return detail::interpret(RealAlgebra{p}, ast.root());
}

double eval(const ScalarField& field, std::span<const double> p) {
  if (p.size() != field.arity())
    throw std::invalid_argument("point dimension does not match field arity");
  if (const double* v = field.override_at(p)) return *v;
  return eval_ast(field.ast(), p);
}

}  // namespace planeslope
