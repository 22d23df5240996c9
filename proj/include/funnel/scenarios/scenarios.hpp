#pragma once

#include <optional>
#include <string>

#include "funnel/interval.hpp"
#include "funnel/scenarios/config.hpp"
#include "funnel/scenarios/report.hpp"

namespace funnel::scenarios {

struct RunOptions {
    /// Directory for report.json, timings.json and artifacts; created if
    /// missing. Empty: nothing is written.
    std::string out_dir;
};

/// Runs the configured scenario. Contract failures are recorded in the
/// report, never thrown; invalid configs throw ConfigError.
Report run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Writes report.json and timings.json into dir.
void write_report(const Report& report, const std::string& dir);

/// Area of S^t when a closed form is known for the set/field pair (box under
/// a constant field, disk under a rotation, centered disk under the radial
/// field while it stays where g = 1).
std::optional<Interval> reference_area(const Json& set, const Json& field, const exact::Rational& t);

}  // namespace funnel::scenarios
