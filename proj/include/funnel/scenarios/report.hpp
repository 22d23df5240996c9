#pragma once

#include <string>
#include <vector>

#include "funnel/evolute/grid.hpp"
#include "funnel/exact/interval_union.hpp"
#include "funnel/scenarios/config.hpp"

namespace funnel::scenarios {

inline constexpr const char* kReportSchema = "funnel-report/1";

// Provenance-tagged values. Exact values carry a recipe that `verify`
// recomputes with exact arithmetic.
Json exact_value(const exact::Rational& value, Json recipe);
Json enclosure_value(double lower, double upper);
Json enclosure_value(const exact::MeasureEnclosure& e, const Json& lower_recipe, const Json& upper_recipe);
Json approx_value(double value);

namespace recipe {
Json literal(const exact::Rational& value);
Json grid_volume(std::uint64_t count, const exact::Rational& h, int dim);
Json k_measure_lower(std::uint64_t n);
Json k_measure_upper(std::uint64_t n);
Json removed_measure(std::uint64_t n, bool clip_to_unit);
Json tail_length_bound(std::uint64_t n);
}  // namespace recipe

/// Recomputes a recipe; throws std::invalid_argument for unknown recipes.
exact::Rational evaluate_recipe(const Json& recipe);

struct Check {
    std::string name;
    std::string contract;
    bool passed = false;
    Json values = Json::object();
};

class Report {
public:
    explicit Report(ScenarioConfig config);

    Json& results() { return results_; }
    void add_check(std::string name, std::string contract, bool passed, Json values = Json::object());
    void add_artifact(const std::string& file) { artifacts_.push_back(file); }
    void add_timing(const std::string& label, double seconds) { timings_[label] = seconds; }

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const std::vector<Check>& checks() const { return checks_; }
    [[nodiscard]] const ScenarioConfig& config() const { return config_; }
    [[nodiscard]] const std::vector<std::string>& artifacts() const { return artifacts_; }

    /// Deterministic document: no timings, no paths outside the output dir.
    [[nodiscard]] Json to_json() const;
    [[nodiscard]] Json timings_json() const;

private:
    ScenarioConfig config_;
    Json results_ = Json::object();
    std::vector<Check> checks_;
    std::vector<std::string> artifacts_;
    Json timings_ = Json::object();
};

/// {box, h, counts, volumes, boundary_upper} with exact volumes.
Json grid_summary(const evolute::OccupancyGrid& grid, const exact::Rational& h);

struct VerifyResult {
    std::size_t checked = 0;
    std::vector<std::string> mismatches;
    [[nodiscard]] bool ok() const { return mismatches.empty(); }
};

/// Replays every exact value in a report against its recipe.
VerifyResult verify_report(const Json& report);

/// Writes text to a file; failures name the path.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace funnel::scenarios
