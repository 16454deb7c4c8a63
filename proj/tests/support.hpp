#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths
// under test except to parse the generated text.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "planeslope/expr.hpp"

namespace planeslope::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Bivariate polynomial sum c_ij x^i y^j with i + j <= degree, kept alongside
/// its coefficients so values and gradients can be computed by hand.
struct Polynomial {
  struct Term {
    double c;
    int i, j;
  };
  std::vector<Term> terms;

  std::string text() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t) os << " + ";
      os << "(" << terms[t].c << ")*x^" << terms[t].i << "*y^" << terms[t].j;
    }
    return os.str();
  }

  double value(double x, double y) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * std::pow(x, t.i) * std::pow(y, t.j);
    return s;
  }

  std::vector<double> gradient(double x, double y) const {
    double gx = 0.0, gy = 0.0;
    for (const auto& t : terms) {
      if (t.i > 0) gx += t.c * t.i * std::pow(x, t.i - 1) * std::pow(y, t.j);
      if (t.j > 0) gy += t.c * t.j * std::pow(x, t.i) * std::pow(y, t.j - 1);
    }
    return {gx, gy};
  }

  static Polynomial random(std::mt19937_64& rng, int degree, double coef = 1.0) {
    Polynomial p;
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; i + j <= degree; ++j)
        if (uniform(rng, 0.0, 1.0) < 0.6) p.terms.push_back({uniform(rng, -coef, coef), i, j});
    if (p.terms.empty()) p.terms.push_back({1.0, 1, 0});
    return p;
  }
};

/// Central difference of the plain evaluator, step h per coordinate.
template <class F>
std::vector<double> central_difference(F f, std::vector<double> p, double h) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    p[i] = x + h;
    const double up = f(p);
    p[i] = x - h;
    const double down = f(p);
    p[i] = x;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_abs(const std::vector<double>& a) {
  double d = 0.0;
  for (double x : a) d = std::max(d, std::abs(x));
  return d;
}

/// Hand-derived secant slope of x^2 y / (x^4 + y^2) at the origin along
/// h = lambda (1, alpha), k = lambda (1, beta).
inline std::vector<double> pathological_family_slope(double lambda, double alpha,
                                                     double beta) {
  const double l2 = lambda * lambda;
  const double denom = (l2 + alpha * alpha) * (l2 + beta * beta);
  return {alpha * beta * (alpha + beta) / denom, (l2 - alpha * beta) / denom};
}

/// Its lambda -> 0 limit.
inline std::vector<double> pathological_family_limit(double alpha, double beta) {
  return {(alpha + beta) / (alpha * beta), -1.0 / (alpha * beta)};
}

inline ScalarField pathological_field() {
  ScalarField f("x^2*y/(x^4+y^2)", 2);
  f.add_override({0.0, 0.0}, 0.0);
  return f;
}

}  // namespace planeslope::testing
