#include <doctest.h>

#include "planeslope/report.hpp"
#include "support.hpp"

using namespace planeslope;
using nlohmann::json;

TEST_CASE("slope document") {
  Slope s{{3, 2}, 0.75, false, false};
  const json j = slope_document(s);
  CHECK(j["schema"] == "planeslope/1");
  CHECK(j["slope"] == json::array({3.0, 2.0}));
  CHECK(j["conditioning"] == 0.75);
  CHECK(j["cancellation_limited"] == false);
  CHECK(j["conditioning_warning"] == false);
}

TEST_CASE("verdict shapes") {
  const json d = to_json(Verdict{Derivable{Slope{{1, 0}}, 0.0, 11}});
  CHECK(d["kind"] == "derivable");
  CHECK(d["estimate"] == json::array({1.0, 0.0}));
  CHECK(d["residual"] == 0.0);
  CHECK(d["convergent_ladders"] == 11);

  const json i = to_json(Verdict{Inconclusive{InconclusiveReason::CancellationFloor, 1}});
  CHECK(i["kind"] == "inconclusive");
  CHECK(i["reason"] == "cancellation_floor");

  const ProbeConfig cfg;
  const auto c = analyze(testing::pathological_field(), Point{0, 0}, cfg);
  const json doc = probe_document(Point{0, 0}, c, cfg);
  CHECK(doc["schema"] == "planeslope/1");
  CHECK(doc["point"] == json::array({0.0, 0.0}));
  CHECK(doc["verdict"]["kind"] == "not_derivable");
  REQUIRE(doc["verdict"]["witnesses"].size() == 2);
  CHECK(doc["verdict"]["witnesses"][0]["frame"]["label"] == "family(1,2)");
  CHECK(doc["verdict"]["witnesses"][0]["frame"]["dirs"] ==
        json::array({json::array({1.0, 1.0}), json::array({1.0, 2.0})}));
  CHECK(doc["verdict"]["separation"].get<double>() >= 1.5 - 1e-6);
  CHECK(doc["ladders"].size() == 12);
  CHECK(doc["config"]["seed"] == 42);
  CHECK(doc["config"]["richardson"] == true);
}

TEST_CASE("rule documents") {
  RuleReport r;
  r.rule = "demo";
  r.trials = 2;
  r.tolerance = 1e-4;
  r.max_error = 1.0;
  r.failures.push_back({Point{1, 2}, {1, 1}, {0, 1}, 1.0});
  r.skipped.push_back({Point{0, 0}, "not_derivable"});
  r.passed = false;
  const json doc = rules_document({r});
  CHECK(doc["schema"] == "planeslope/1");
  CHECK(doc["passed"] == false);
  const json& rep = doc["reports"][0];
  CHECK(rep["rule"] == "demo");
  CHECK(rep["trials"] == 2);
  CHECK(rep["max_error"] == 1.0);
  CHECK(rep["failures"][0]["point"] == json::array({1.0, 2.0}));
  CHECK(rep["skipped"][0]["reason"] == "not_derivable");
  CHECK(grad_document({0.5, -0.25})["grad"] == json::array({0.5, -0.25}));
}
