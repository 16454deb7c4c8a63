#include "planeslope/report.hpp"

namespace planeslope {

using nlohmann::json;

json to_json(const Slope& slope) {
  return json{{"components", slope.components},
              {"conditioning", slope.conditioning},
              {"cancellation_limited", slope.cancellation_limited},
              {"conditioning_warning", slope.conditioning_warning}};
}

json to_json(const Frame& frame) { return json(frame.dirs()); }

json to_json(const FrameDescriptor& frame) {
  return json{{"label", frame.label}, {"dirs", to_json(frame.frame)}};
}

json to_json(const Verdict& verdict) {
  json out{{"kind", verdict_tag(verdict)}};
  if (const auto* d = std::get_if<Derivable>(&verdict)) {
    out["estimate"] = d->estimate.components;
    out["residual"] = d->residual;
    out["convergent_ladders"] = d->convergent;
  } else if (const auto* nd = std::get_if<NotDerivable>(&verdict)) {
    out["witnesses"] = json::array({
        {{"frame", to_json(nd->frame_a)}, {"limit", nd->limit_a.components}},
        {{"frame", to_json(nd->frame_b)}, {"limit", nd->limit_b.components}},
    });
    out["separation"] = nd->separation;
  } else {
    const auto& inc = std::get<Inconclusive>(verdict);
    out["reason"] = to_string(inc.reason);
    out["convergent_ladders"] = inc.convergent;
  }
  return out;
}

json to_json(const RuleReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"point", f.point.coords},
                        {"lhs", f.lhs},
                        {"rhs", f.rhs},
                        {"error", f.error}});
  json skipped = json::array();
  for (const auto& s : report.skipped)
    skipped.push_back({{"point", s.point.coords}, {"reason", s.reason}});
  return json{{"rule", report.rule},
              {"trials", report.trials},
              {"tolerance", report.tolerance},
              {"max_error", report.max_error},
              {"passed", report.passed},
              {"failures", failures},
              {"skipped", skipped}};
}

json to_json(const ProbeConfig& c) {
  return json{{"s0", c.ladder.s0},
              {"rho", c.ladder.rho},
              {"levels", c.ladder.levels},
              {"tol_conv", c.tol_conv},
              {"tol_agree", c.tol_agree},
              {"tol_sep", c.tol_sep},
              {"random_frames", c.random_frames},
              {"seed", c.seed},
              {"richardson", c.richardson},
              {"window", c.window},
              {"min_convergent", c.min_convergent}};
}

json slope_document(const Slope& slope) {
  return json{{"schema", kSchema},
              {"slope", slope.components},
              {"conditioning", slope.conditioning},
              {"cancellation_limited", slope.cancellation_limited},
              {"conditioning_warning", slope.conditioning_warning}};
}

json probe_document(const Point& p, const Classification& c,
                    const ProbeConfig& config) {
  json ladders = json::array();
  for (const auto& l : c.ladders) {
    json entry{{"frame", l.descriptor.label},
               {"rungs", l.run.samples.size()},
               {"converged", l.limit.has_value()}};
    if (l.limit)
      entry["limit"] = l.limit->components;
    else
      entry["failure"] = to_string(l.failure);
    ladders.push_back(std::move(entry));
  }
  return json{{"schema", kSchema},
              {"point", p.coords},
              {"verdict", to_json(c.verdict)},
              {"ladders", ladders},
              {"config", to_json(config)}};
}

json grad_document(const Vec& g) {
  return json{{"schema", kSchema}, {"grad", g}};
}

json rules_document(const std::vector<RuleReport>& reports) {
  json list = json::array();
  bool passed = true;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    passed = passed && r.passed;
  }
  return json{{"schema", kSchema}, {"passed", passed}, {"reports", list}};
}

}  // namespace planeslope
