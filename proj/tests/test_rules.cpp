#include <doctest.h>

#include "planeslope/autodiff.hpp"
#include "planeslope/rules.hpp"
#include "support.hpp"

using namespace planeslope;
using testing::max_abs_diff;

namespace {

void check_coherent(const RuleReport& r) {
  CAPTURE(r.rule);
  CHECK(r.passed == r.failures.empty());
  CHECK(r.passed == (r.max_error <= r.tolerance));
  for (const auto& f : r.failures) {
    CHECK(f.error > r.tolerance);
    CHECK(f.error <= r.max_error);
  }
}

}  // namespace

TEST_CASE("sample points") {
  const auto a = sample_points(2, 30, 5);
  const auto b = sample_points(2, 30, 5);
  REQUIRE(a.size() == 30);
  CHECK(a == b);
  for (const auto& p : a) {
    CHECK(p.size() == 2);
    for (double x : p.coords) CHECK((x >= -2 && x <= 2));
  }
  const auto c = sample_points(3, 10, 5, 0, 1, [](const Point& p) { return p[0] < 0.5; });
  for (const auto& p : c) CHECK(p[0] >= 0.5);
}

TEST_CASE("affine rule") {
  const auto r = check_affine(3, 2, 1, 100, 42);
  check_coherent(r);
  CHECK(r.passed);
  CHECK(r.trials == 100);
  CHECK(r.max_error <= 1e-9);
  CHECK(check_affine(1, 0, 0, 20, 1).passed);
  const auto z = check_affine(0, 0, 5, 20, 1);
  CHECK(z.passed);
  CHECK(z.max_error == 0.0);
}

TEST_CASE("linearity rule") {
  const ScalarField f("x^2", 2), g("y^2", 2);
  const std::vector<Point> one{Point{1, 1}};
  const auto r = check_linearity(f, g, 2, 3, one);
  check_coherent(r);
  CHECK(r.passed);
  CHECK(r.skipped.empty());

  const auto self = check_linearity(f, g, 1, 0, one);
  CHECK(self.max_error <= 1e-9);

  const ScalarField h("x^2*y^3", 2), q("x/y", 2);
  const auto pts = sample_points(2, 20, 3, -2, 2, [](const Point& p) { return std::abs(p[1]) < 0.1; });
  const auto r2 = check_linearity(h, q, 0.5, -1.5, pts);
  check_coherent(r2);
  CHECK(r2.passed);
  CHECK_THROWS_AS(check_linearity(testing::pathological_field(), g, 1, 1, one),
                  std::invalid_argument);
}

TEST_CASE("product rule") {
  const std::vector<Point> one{Point{1, 1}};
  const auto r = check_product(ScalarField("x^2", 2), ScalarField("y^3", 2), one);
  check_coherent(r);
  CHECK(r.passed);
  CHECK(check_product(ScalarField("x", 2), ScalarField("y", 2), std::vector<Point>{Point{2, 5}})
            .passed);
  CHECK(check_product(ScalarField("sin(x)", 2), ScalarField("1", 2), one).max_error <= 1e-9);
}

TEST_CASE("quotient rule") {
  const auto r = check_quotient(ScalarField("y", 2), std::vector<Point>{Point{1, 2}});
  check_coherent(r);
  CHECK(r.passed);
  CHECK(check_quotient(ScalarField("2", 2), std::vector<Point>{Point{1, 2}}).max_error == 0.0);
  const auto z = check_quotient(ScalarField("x", 2), std::vector<Point>{Point{0, 1}, Point{1, 1}});
  CHECK(z.skipped.size() == 1);
  CHECK(z.passed);
}

TEST_CASE("gradient equivalence") {
  const auto pts = sample_points(2, 50, 42);
  const auto r = check_gradient_equivalence(ScalarField("x^2*y^3", 2), pts);
  check_coherent(r);
  CHECK(r.passed);
  CHECK(r.skipped.empty());

  const auto a = check_gradient_equivalence(ScalarField("3*x-y+4", 2), pts);
  CHECK(a.max_error <= 1e-9);

  const auto s = check_gradient_equivalence(ScalarField("sin(x)*exp(y)", 2),
                                            std::vector<Point>{Point{0, 0}});
  CHECK(s.passed);

  const auto p = check_gradient_equivalence(testing::pathological_field(),
                                            std::vector<Point>{Point{0, 0}, Point{1, 1}});
  CHECK(p.passed);
  REQUIRE(p.skipped.size() == 1);
  CHECK(p.skipped[0].point == Point{0, 0});
}

TEST_CASE("curated suite passes and skips only the pathological origin") {
  const auto reports = run_rule_suite(20, 42);
  REQUIRE(reports.size() == 6);
  std::size_t skips = 0;
  for (const auto& r : reports) {
    check_coherent(r);
    CHECK(r.passed);
    skips += r.skipped.size();
  }
  CHECK(skips == 1);
  REQUIRE(reports.back().skipped.size() == 1);
  CHECK(reports.back().skipped[0].point == Point{0, 0});
}

TEST_CASE("serial and parallel reports agree") {
  const auto pts = sample_points(2, 10, 9);
  const ScalarField f("cos(x*y)+x^3", 2), g("exp(-(x^2+y^2))", 2);
  const auto a = check_product(f, g, pts, {}, Execution::Parallel);
  const auto b = check_product(f, g, pts, {}, Execution::Serial);
  CHECK(a.max_error == b.max_error);
  CHECK(a.failures.size() == b.failures.size());
  CHECK(check_affine(2, -1, 0, 30, 4, Execution::Serial).max_error ==
        check_affine(2, -1, 0, 30, 4, Execution::Parallel).max_error);
}
