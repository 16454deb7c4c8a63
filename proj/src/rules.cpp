#include "planeslope/rules.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>

#include "planeslope/autodiff.hpp"
#include "planeslope/detail/random.hpp"
#include "planeslope/secantplane.hpp"

namespace planeslope {

namespace {

struct Comparison {
  Vec lhs;
  Vec rhs;
  double error;
};
using TrialResult = std::variant<Comparison, RuleSkip>;

template <class Trial>
std::vector<TrialResult> run_trials(std::size_t count, Execution exec,
                                    Trial trial) {
  std::vector<std::optional<TrialResult>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        slots[i] = trial(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) slots[i] = trial(static_cast<std::size_t>(i));
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<TrialResult> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

RuleReport assemble(std::string rule, double tolerance,
                    std::span<const Point> points,
                    const std::vector<TrialResult>& results) {
  RuleReport report;
  report.rule = std::move(rule);
  report.tolerance = tolerance;
  report.trials = results.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (const auto* skip = std::get_if<RuleSkip>(&results[i])) {
      report.skipped.push_back(*skip);
      continue;
    }
    const auto& c = std::get<Comparison>(results[i]);
    report.max_error = std::max(report.max_error, c.error);
    if (!(c.error <= tolerance))
      report.failures.push_back({points[i], c.lhs, c.rhs, c.error});
  }
  report.passed = report.failures.empty();
  return report;
}

/// Probe estimate, or the reason there is none.
std::variant<Vec, std::string> probe_estimate(const ScalarField& field,
                                              const Point& p,
                                              const ProbeConfig& config) {
  try {
    const Verdict v = classify_serial(field, p, config);
    if (const auto* d = std::get_if<Derivable>(&v)) return d->estimate.components;
    return std::string(verdict_tag(v));
  } catch (const DomainError& e) {
    return std::string("domain_error");
  }
}

void require_plain(const ScalarField& f) {
  if (!f.overrides().empty())
    throw std::invalid_argument(
        "combination rules need fields without point overrides");
}

Vec axpy(double a, const Vec& x, double b, const Vec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

// Probes each field at p; returns a skip if any is not derivable.
template <class Combine>
TrialResult compare_probes(std::span<const ScalarField* const> fields,
                           const Point& p, const ProbeConfig& config,
                           Combine combine) {
  std::vector<Vec> estimates;
  for (const ScalarField* f : fields) {
    auto e = probe_estimate(*f, p, config);
    if (auto* reason = std::get_if<std::string>(&e))
      return RuleSkip{p, std::move(*reason)};
    estimates.push_back(std::move(std::get<Vec>(e)));
  }
  return combine(estimates);
}

ExprAst var(std::size_t n, std::size_t i) { return ExprAst::variable(n, i); }
ExprAst num(std::size_t n, double v) { return ExprAst::constant(n, v); }

}  // namespace

std::vector<Point> sample_points(std::size_t n, std::size_t count,
                                 std::uint64_t seed, double lo, double hi,
                                 const std::function<bool(const Point&)>& reject) {
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    Point p{Vec(n)};
    for (std::size_t i = 0; i < n; ++i) p[i] = detail::uniform(rng, lo, hi);
    if (reject && reject(p)) continue;
    out.push_back(std::move(p));
  }
  return out;
}

RuleReport check_affine(double alpha, double beta, double gamma,
                        std::size_t trials, std::uint64_t seed, Execution exec) {
  const ScalarField field(num(2, alpha) * var(2, 0) + num(2, beta) * var(2, 1) +
                          num(2, gamma));
  // Draw every trial up front so the stream does not depend on scheduling.
  struct Setup {
    Point p;
    Frame frame;
  };
  std::mt19937_64 rng(seed);
  std::vector<Setup> setups;
  std::vector<Point> points;
  setups.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Point p{detail::uniform(rng, -2.0, 2.0), detail::uniform(rng, -2.0, 2.0)};
    for (;;) {
      const double a = 2.0 * std::numbers::pi * detail::uniform01(rng);
      const double b = 2.0 * std::numbers::pi * detail::uniform01(rng);
      const double sa = std::pow(10.0, detail::uniform(rng, -2.0, 0.0));
      const double sb = std::pow(10.0, detail::uniform(rng, -2.0, 0.0));
      Frame frame({{sa * std::cos(a), sa * std::sin(a)},
                   {sb * std::cos(b), sb * std::sin(b)}});
      if (conditioning(frame) >= kKappaMin) {
        points.push_back(p);
        setups.push_back({std::move(p), std::move(frame)});
        break;
      }
    }
  }
  const Vec expected{alpha, beta};
  auto results = run_trials(trials, exec, [&](std::size_t i) -> TrialResult {
    const Slope s = secant_slope(field, setups[i].p, setups[i].frame);
    return Comparison{s.components, expected,
                      max_distance(s.components, expected)};
  });
  return assemble("affine", kAffineTolerance, points, results);
}

RuleReport check_linearity(const ScalarField& f, const ScalarField& g,
                           double alpha, double beta,
                           std::span<const Point> points,
                           const ProbeConfig& config, Execution exec) {
  require_plain(f);
  require_plain(g);
  const std::size_t n = f.arity();
  const ScalarField combo(num(n, alpha) * f.ast() + num(n, beta) * g.ast());
  const ScalarField* fields[] = {&combo, &f, &g};
  auto results = run_trials(points.size(), exec, [&](std::size_t i) {
    return compare_probes(fields, points[i], config, [&](const std::vector<Vec>& e) {
      Vec rhs = axpy(alpha, e[1], beta, e[2]);
      return TrialResult{Comparison{e[0], rhs, max_distance(e[0], rhs)}};
    });
  });
  return assemble("linearity", kRuleTolerance, points, results);
}

RuleReport check_product(const ScalarField& f, const ScalarField& g,
                         std::span<const Point> points,
                         const ProbeConfig& config, Execution exec) {
  require_plain(f);
  require_plain(g);
  const ScalarField product(f.ast() * g.ast());
  const ScalarField* fields[] = {&product, &f, &g};
  auto results = run_trials(points.size(), exec, [&](std::size_t i) -> TrialResult {
    const Point& p = points[i];
    double fp = 0.0, gp = 0.0;
    try {
      fp = eval(f, p);
      gp = eval(g, p);
    } catch (const DomainError&) {
      return RuleSkip{p, "domain_error"};
    }
    return compare_probes(fields, p, config, [&](const std::vector<Vec>& e) {
      Vec rhs = axpy(gp, e[1], fp, e[2]);
      return TrialResult{Comparison{e[0], rhs, max_distance(e[0], rhs)}};
    });
  });
  return assemble("product", kRuleTolerance, points, results);
}

RuleReport check_quotient(const ScalarField& f, std::span<const Point> points,
                          const ProbeConfig& config, Execution exec) {
  require_plain(f);
  const ScalarField reciprocal(num(f.arity(), 1.0) / f.ast());
  const ScalarField* fields[] = {&reciprocal, &f};
  auto results = run_trials(points.size(), exec, [&](std::size_t i) -> TrialResult {
    const Point& p = points[i];
    double fp = 0.0;
    try {
      fp = eval(f, p);
    } catch (const DomainError&) {
      return RuleSkip{p, "domain_error"};
    }
    if (std::abs(fp) < 1e-6) return RuleSkip{p, "near_zero_denominator"};
    return compare_probes(fields, p, config, [&](const std::vector<Vec>& e) {
      Vec rhs(e[1].size());
      for (std::size_t c = 0; c < rhs.size(); ++c) rhs[c] = -e[1][c] / (fp * fp);
      return TrialResult{Comparison{e[0], rhs, max_distance(e[0], rhs)}};
    });
  });
  return assemble("quotient", kRuleTolerance, points, results);
}

RuleReport check_gradient_equivalence(const ScalarField& f,
                                      std::span<const Point> points,
                                      const ProbeConfig& config,
                                      Execution exec) {
  auto results = run_trials(points.size(), exec, [&](std::size_t i) -> TrialResult {
    const Point& p = points[i];
    auto e = probe_estimate(f, p, config);
    if (auto* reason = std::get_if<std::string>(&e))
      return RuleSkip{p, std::move(*reason)};
    Vec g;
    try {
      g = grad(f, p);
    } catch (const OverridePointError&) {
      return RuleSkip{p, "override_point"};
    } catch (const DomainError&) {
      return RuleSkip{p, "domain_error"};
    }
    double scale = 0.0;
    for (double c : g) scale = std::max(scale, std::abs(c));
    const Vec& est = std::get<Vec>(e);
    return Comparison{est, g, max_distance(est, g) / (1.0 + scale)};
  });
  return assemble("gradient_equivalence", kGradientTolerance, points, results);
}

std::vector<RuleReport> run_rule_suite(std::size_t trials, std::uint64_t seed,
                                       Execution exec) {
  ProbeConfig config;
  config.seed = seed;
  const auto points = sample_points(2, trials, seed);

  std::vector<RuleReport> out;
  out.push_back(check_affine(3.0, 2.0, 1.0, trials, seed, exec));
  out.push_back(check_linearity(ScalarField("x^2*y^3", 2),
                                ScalarField("sin(x)*exp(y)", 2), 2.0, -3.0,
                                points, config, exec));
  out.push_back(check_product(ScalarField("x^2+y", 2),
                              ScalarField("cos(x*y)", 2), points, config, exec));
  out.push_back(check_quotient(ScalarField("x^2+y^2+1", 2), points, config, exec));
  out.push_back(check_gradient_equivalence(ScalarField("x^2*y^3", 2), points,
                                           config, exec));

  ScalarField counterexample("x^2*y/(x^4+y^2)", 2);
  counterexample.add_override({0.0, 0.0}, 0.0);
  const std::vector<Point> ring{{0.0, 0.0},  {1.0, 1.0},   {-1.0, 0.5},
                                {0.5, -1.5}, {-2.0, -2.0}, {1.5, 0.25}};
  RuleReport pathological =
      check_gradient_equivalence(counterexample, ring, config, exec);
  pathological.rule = "gradient_equivalence_pathological";
  out.push_back(std::move(pathological));
  return out;
}

}  // namespace planeslope
