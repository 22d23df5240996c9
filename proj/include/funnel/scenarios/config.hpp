#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "funnel/exact/rational.hpp"
#include "funnel/flow/vector_field.hpp"
#include "funnel/geometry.hpp"
#include "funnel/sets/set_description.hpp"

namespace funnel::scenarios {

using Json = nlohmann::json;

/// Bad configuration: malformed file, unknown scenario, missing or invalid field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string scenario;
    /// Defaults merged with the config file and then the overrides.
    Json values;
};

/// Parses a JSON config file; syntax errors report line and column.
Json load_config_file(const std::string& path);

/// Applies "dotted.key=value". The value is read as JSON when it parses,
/// otherwise kept as a string (so t=1/2 stays the exact string "1/2").
/// grid.h=X is shorthand for grid.resolutions=[X].
void apply_override(Json& values, const std::string& assignment);

/// Defaults for `scenario`, then the file (merge-patch), then the overrides;
/// the result is validated.
ScenarioConfig make_config(const std::string& scenario, const std::optional<std::string>& file,
                           const std::vector<std::string>& overrides);

/// Checks the generic invariants: exact numeric strings, positive h, dtau
/// and tolerances, nondegenerate boxes.
void validate(const Json& values);

// Typed accessors on dotted paths; every failure is a ConfigError naming the field.
const Json& node_at(const Json& values, const std::string& path);
bool has(const Json& values, const std::string& path);
exact::Rational rational_of(const Json& node, const std::string& path);
exact::Rational rational_at(const Json& values, const std::string& path);
double number_of(const Json& node, const std::string& path);
double number_at(const Json& values, const std::string& path);
std::int64_t integer_at(const Json& values, const std::string& path);
std::string string_at(const Json& values, const std::string& path);
bool bool_at(const Json& values, const std::string& path, bool fallback);
std::vector<exact::Rational> rational_list_of(const Json& node, const std::string& path);
Vec vec_of(const Json& node, const std::string& path);
Box box_of(const Json& node, const std::string& path);

/// {"variant": "box" | "disk" | "half_space" | "ex_plane" | "ex_unbounded", ...}
sets::SetDescription build_set(const Json& node, const std::string& path);

/// {"variant": "constant" | "linear" | "rotation" | "radial", ..., "shift"?, "scale"?}
flow::VectorField build_field(const Json& node, const std::string& path);

}  // namespace funnel::scenarios
