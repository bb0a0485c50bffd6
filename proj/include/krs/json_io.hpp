#pragma once

#include <string>

#include <json.hpp>

#include "krs/core.hpp"
#include "krs/killrestart.hpp"
#include "krs/preemptive.hpp"

namespace krs {

/// Parses {"machines": m, "jobs": [{"p": .., "w": .., "r": ..}, ...]}.
/// w defaults to 1 and r to 0.
Instance instance_from_json(const nlohmann::json& j);

/// Parses {"b": .., "classes": [{"e": .., "n": .. or "..", "eps": ..}, ...]}.
/// Counts may be numbers or decimal strings; values beyond 2^53 are rejected.
GroupedInstance grouped_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const Instance& instance);
nlohmann::json grouped_to_json(const GroupedInstance& grouped);
nlohmann::json report_to_json(const CompletionReport& report);
nlohmann::json schedule_to_json(const ProbeSchedule& schedule);

Instance load_instance(const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace krs
