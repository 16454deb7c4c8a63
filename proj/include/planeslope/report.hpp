#pragma once

// JSON shapes emitted by the command-line tool. Every top-level document
// carries "schema": "planeslope/1".

#include <json.hpp>
#include <vector>

#include "planeslope/probe.hpp"
#include "planeslope/rules.hpp"
#include "planeslope/secantplane.hpp"

namespace planeslope {

inline constexpr const char* kSchema = "planeslope/1";

nlohmann::json to_json(const Slope& slope);
nlohmann::json to_json(const Frame& frame);
nlohmann::json to_json(const FrameDescriptor& frame);
nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const RuleReport& report);
nlohmann::json to_json(const ProbeConfig& config);

/// {"schema", "slope", "conditioning", "cancellation_limited", ...}
nlohmann::json slope_document(const Slope& slope);
/// {"schema", "point", "verdict": {...}, "ladders": [...]}
nlohmann::json probe_document(const Point& p, const Classification& c,
                              const ProbeConfig& config);
/// {"schema", "grad"}
nlohmann::json grad_document(const Vec& g);
/// {"schema", "passed", "reports": [...]}
nlohmann::json rules_document(const std::vector<RuleReport>& reports);

}  // namespace planeslope
