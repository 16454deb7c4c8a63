#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "planeslope/expr.hpp"
#include "planeslope/probe.hpp"

namespace planeslope {

enum class Execution { Parallel, Serial };

/// Rule tolerances.
inline constexpr double kAffineTolerance = 1e-9;
inline constexpr double kRuleTolerance = 1e-4;
inline constexpr double kGradientTolerance = 1e-5;

struct RuleFailure {
  Point point;
  Vec lhs;
  Vec rhs;
  double error;
};

struct RuleSkip {
  Point point;
  std::string reason;
};

/// Outcome of checking one calculus rule at many points.
///
/// passed holds exactly when failures is empty, which is exactly when
/// max_error <= tolerance.
struct RuleReport {
  std::string rule;
  std::size_t trials = 0;
  double tolerance = 0.0;
  double max_error = 0.0;
  std::vector<RuleFailure> failures;
  std::vector<RuleSkip> skipped;
  bool passed = true;
};

/// count points uniform in [lo, hi]^n from a seeded generator; points for
/// which `reject` returns true are redrawn.
std::vector<Point> sample_points(
    std::size_t n, std::size_t count, std::uint64_t seed, double lo = -2.0,
    double hi = 2.0, const std::function<bool(const Point&)>& reject = {});

/// alpha x + beta y + gamma has secant slope (alpha, beta) for every frame,
/// without any limit. Random points in [-2,2]^2, random frames with
/// conditioning >= kKappaMin, per-direction scales log-uniform in [1e-2, 1].
RuleReport check_affine(double alpha, double beta, double gamma,
                        std::size_t trials, std::uint64_t seed,
                        Execution exec = Execution::Parallel);

/// probe(alpha f + beta g) == alpha probe(f) + beta probe(g).
RuleReport check_linearity(const ScalarField& f, const ScalarField& g,
                           double alpha, double beta,
                           std::span<const Point> points,
                           const ProbeConfig& config = {},
                           Execution exec = Execution::Parallel);

/// probe(f g) == probe(f) g + f probe(g).
RuleReport check_product(const ScalarField& f, const ScalarField& g,
                         std::span<const Point> points,
                         const ProbeConfig& config = {},
                         Execution exec = Execution::Parallel);

/// probe(1/f) == -probe(f) / f^2; points with |f| < 1e-6 are skipped.
RuleReport check_quotient(const ScalarField& f, std::span<const Point> points,
                          const ProbeConfig& config = {},
                          Execution exec = Execution::Parallel);

/// probe(f) == grad f, error measured as |probe - grad|_inf / (1 + |grad|_inf).
RuleReport check_gradient_equivalence(const ScalarField& f,
                                      std::span<const Point> points,
                                      const ProbeConfig& config = {},
                                      Execution exec = Execution::Parallel);

/// The curated suite behind `planeslope rules`: affine, linearity, product,
/// quotient and gradient equivalence on smooth fields, plus gradient
/// equivalence on the x^2 y / (x^4 + y^2) field at a point set that includes
/// the origin (where it must be skipped).
std::vector<RuleReport> run_rule_suite(std::size_t trials, std::uint64_t seed,
                                       Execution exec = Execution::Parallel);

}  // namespace planeslope
