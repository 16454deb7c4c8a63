#include <doctest.h>

#include <sstream>

#include "planeslope/scan.hpp"
#include "support.hpp"

using namespace planeslope;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("grid coordinates include the endpoints") {
  CHECK(grid_coordinate(-1, 1, 0, 5) == -1.0);
  CHECK(grid_coordinate(-1, 1, 2, 5) == 0.0);
  CHECK(grid_coordinate(-1, 1, 4, 5) == 1.0);
  CHECK(grid_coordinate(-1, 1, 0, 1) == -1.0);
  CHECK(grid_coordinate(0.1, 0.7, 6, 7) == 0.7);
}

TEST_CASE("smooth field scans as derivable everywhere") {
  const auto r = scan(ScalarField("x^2+y^2", 2), Box{-1, 1, -1, 1}, 5);
  REQUIRE(r.cells.size() == 25);
  for (const auto& c : r.cells) {
    CHECK(c.verdict == "derivable");
    REQUIRE(c.estimate);
    CHECK(testing::max_abs_diff(*c.estimate, {2 * c.point[0], 2 * c.point[1]}) <= 1e-5 * 3);
  }
  CHECK(r.cells[1].point == Point{-0.5, -1});
  CHECK(r.cells[5].point == Point{-1, -0.5});
  CHECK(r.counts().at("derivable") == 25);
}

TEST_CASE("pathological field has exactly one non-derivable cell") {
  const auto r = scan(testing::pathological_field(), Box{-1, 1, -1, 1}, 5);
  std::size_t bad = 0;
  for (const auto& c : r.cells) {
    if (c.point == Point{0, 0}) {
      CHECK(c.verdict == "not_derivable");
      REQUIRE(c.metric);
      CHECK(*c.metric >= 1.5 - 1e-6);
      CHECK_FALSE(c.estimate);
    } else {
      CHECK(c.verdict == "derivable");
    }
    bad += c.verdict == "not_derivable";
  }
  CHECK(bad == 1);
}

TEST_CASE("domain errors are recorded per cell") {
  const auto r = scan(ScalarField("ln(x)", 2), Box{-1, 1, 0, 1}, 3);
  CHECK(r.counts().at("domain_error") >= 3);
  CHECK(r.cells.size() == 9);
}

TEST_CASE("serial and parallel scans are identical") {
  const ScalarField f("sin(x)*exp(y)", 2);
  std::ostringstream a, b;
  write_csv(a, scan(f, Box{-1, 2, -2, 0.5}, 6));
  write_csv(b, scan_serial(f, Box{-1, 2, -2, 0.5}, 6));
  CHECK(a.str() == b.str());
}

TEST_CASE("csv shape") {
  for (std::size_t res : {1u, 2u, 4u}) {
    std::ostringstream os;
    write_csv(os, scan(ScalarField("x*y", 2), Box{0, 1, 0, 1}, res));
    const auto ls = lines(os.str());
    REQUIRE(ls.size() == res * res + 1);
    CHECK(ls[0] == "point_x,point_y,verdict,est_1,est_2,residual_or_separation");
    if (res == 1) CHECK(ls[1].rfind("0,0,derivable,", 0) == 0);
  }
  std::ostringstream os;
  write_csv(os, scan(ScalarField("ln(x)", 2), Box{0, 0, 0, 0}, 1));
  CHECK(lines(os.str())[1] == "0,0,domain_error,,,");
  CHECK_THROWS_AS(scan(ScalarField("x", 1), Box{0, 1, 0, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(scan(ScalarField("x", 2), Box{0, 1, 0, 1}, 0), std::invalid_argument);
}
