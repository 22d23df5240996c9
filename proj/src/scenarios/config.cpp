#include "funnel/scenarios/config.hpp"

#include <fstream>
#include <sstream>

#include "funnel/scenarios/registry.hpp"

namespace funnel::scenarios {

using exact::Rational;

namespace {

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (const auto& p : parts) {
        if (p.empty()) {
            throw ConfigError("malformed key '" + path + "'");
        }
    }
    return parts;
}

bool is_index(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

const Json* find(const Json& values, const std::string& path)
{
    const Json* cur = &values;
    for (const auto& part : split_path(path)) {
        if (cur->is_object()) {
            auto it = cur->find(part);
            if (it == cur->end()) {
                return nullptr;
            }
            cur = &*it;
        } else if (cur->is_array() && is_index(part)) {
            const auto i = std::stoul(part);
            if (i >= cur->size()) {
                return nullptr;
            }
            cur = &(*cur)[i];
        } else {
            return nullptr;
        }
    }
    return cur;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const Json& member(const Json& node, const std::string& path, const std::string& key)
{
    if (!node.is_object() || !node.contains(key)) {
        throw ConfigError("missing field '" + join(path, key) + "'");
    }
    return node.at(key);
}

void check_positive(const Json& values, const std::string& path)
{
    if (number_at(values, path) <= 0.0) {
        throw ConfigError("field '" + path + "' must be positive");
    }
}

// Each side of the box must be a whole number of cells of width h.
void check_tiles(const Json& box, const std::string& box_path, const exact::Rational& h, const std::string& h_path)
{
    const auto lo = rational_list_of(node_at(box, "lo"), box_path + ".lo");
    const auto hi = rational_list_of(node_at(box, "hi"), box_path + ".hi");
    for (std::size_t k = 0; k < lo.size() && k < hi.size(); ++k) {
        if (!((hi[k] - lo[k]) / h).is_integer()) {
            throw ConfigError("field '" + h_path + "' = " + h.str() + " does not divide the side of '" + box_path + "'");
        }
    }
}

void validate_block(const Json& v, const std::string& prefix)
{
    auto key = [&](const std::string& k) { return join(prefix, k); };
    if (has(v, key("set"))) {
        (void)build_set(node_at(v, key("set")), key("set"));
    }
    if (has(v, key("field"))) {
        (void)build_field(node_at(v, key("field")), key("field"));
    }
    if (has(v, key("t")) && rational_at(v, key("t")).sign() < 0) {
        throw ConfigError("field '" + key("t") + "' must be nonnegative");
    }
    if (has(v, key("times"))) {
        for (const auto& t : rational_list_of(node_at(v, key("times")), key("times"))) {
            if (t.sign() < 0) {
                throw ConfigError("field '" + key("times") + "' must hold nonnegative times");
            }
        }
    }
    if (has(v, key("dtau"))) {
        const Json& d = node_at(v, key("dtau"));
        if (!(d.is_string() && d.get<std::string>() == "auto")) {
            check_positive(v, key("dtau"));
        }
    }
    if (has(v, key("mode"))) {
        const auto m = string_at(v, key("mode"));
        if (m != "closed" && m != "open") {
            throw ConfigError("field '" + key("mode") + "' must be \"closed\" or \"open\"");
        }
    }
    if (has(v, key("grid.box"))) {
        (void)box_of(node_at(v, key("grid.box")), key("grid.box"));
    }
    if (has(v, key("grid.resolutions"))) {
        const auto hs = rational_list_of(node_at(v, key("grid.resolutions")), key("grid.resolutions"));
        if (hs.empty()) {
            throw ConfigError("field '" + key("grid.resolutions") + "' is empty");
        }
        for (const auto& h : hs) {
            if (h.sign() <= 0) {
                throw ConfigError("field '" + key("grid.resolutions") + "' must hold positive spacings");
            }
            if (has(v, key("grid.box"))) {
                check_tiles(node_at(v, key("grid.box")), key("grid.box"), h, key("grid.resolutions"));
            }
        }
    }
    if (has(v, key("h"))) {
        if (rational_at(v, key("h")).sign() <= 0) {
            throw ConfigError("field '" + key("h") + "' must be positive");
        }
    }
    if (has(v, key("box"))) {
        (void)box_of(node_at(v, key("box")), key("box"));
        if (has(v, key("h"))) {
            check_tiles(node_at(v, key("box")), key("box"), rational_at(v, key("h")), key("h"));
        }
    }
}

}  // namespace

Json load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
}

void apply_override(Json& values, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::parse_error&) {
        value = raw;
    }
    if (path == "grid.h") {
        path = "grid.resolutions";
        value = Json::array({value});
    }
    Json* cur = &values;
    const auto parts = split_path(path);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& part = parts[i];
        const bool last = i + 1 == parts.size();
        if (cur->is_array() && is_index(part)) {
            const auto idx = std::stoul(part);
            if (idx >= cur->size()) {
                throw ConfigError("override '" + path + "': index out of range");
            }
            cur = &(*cur)[idx];
        } else {
            if (!cur->is_object()) {
                throw ConfigError("override '" + path + "': '" + part + "' is not inside an object");
            }
            cur = &(*cur)[part];
        }
        if (last) {
            *cur = value;
        }
    }
}

ScenarioConfig make_config(const std::string& scenario, const std::optional<std::string>& file,
                           const std::vector<std::string>& overrides)
{
    const ScenarioInfo& info = find_scenario(scenario);
    ScenarioConfig cfg{info.id, info.defaults};
    if (file) {
        Json patch = load_config_file(*file);
        if (!patch.is_object()) {
            throw ConfigError("config file '" + *file + "' must hold a JSON object");
        }
        if (patch.contains("scenario") && patch["scenario"] != info.id) {
            throw ConfigError("config file is for scenario " + patch["scenario"].dump() + ", not '" + info.id + "'");
        }
        cfg.values.merge_patch(patch);
    }
    for (const auto& o : overrides) {
        apply_override(cfg.values, o);
    }
    cfg.values["scenario"] = info.id;
    validate(cfg.values);
    return cfg;
}

void validate(const Json& values)
{
    if (!values.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    validate_block(values, "");
    if (has(values, "tolerance.flow")) {
        check_positive(values, "tolerance.flow");
    }
    if (has(values, "cases")) {
        const Json& cases = node_at(values, "cases");
        if (!cases.is_array()) {
            throw ConfigError("field 'cases' must be an array");
        }
        for (std::size_t i = 0; i < cases.size(); ++i) {
            validate_block(values, "cases." + std::to_string(i));
        }
    }
    if (has(values, "groups")) {
        const Json& groups = node_at(values, "groups");
        if (!groups.is_array()) {
            throw ConfigError("field 'groups' must be an array");
        }
        for (std::size_t i = 0; i < groups.size(); ++i) {
            validate_block(values, "groups." + std::to_string(i));
        }
    }
}

const Json& node_at(const Json& values, const std::string& path)
{
    const Json* n = find(values, path);
    if (!n || n->is_null()) {
        throw ConfigError("missing field '" + path + "'");
    }
    return *n;
}

bool has(const Json& values, const std::string& path)
{
    const Json* n = find(values, path);
    return n && !n->is_null();
}

Rational rational_of(const Json& node, const std::string& path)
{
    if (node.is_number_integer()) {
        return Rational(node.get<long long>());
    }
    if (node.is_string()) {
        try {
            return Rational::parse(node.get<std::string>());
        } catch (const std::exception&) {
            throw ConfigError("field '" + path + "': '" + node.get<std::string>() + "' is not an exact rational");
        }
    }
    throw ConfigError("field '" + path + "' must be an integer or a \"p/q\" string");
}

Rational rational_at(const Json& values, const std::string& path) { return rational_of(node_at(values, path), path); }

double number_of(const Json& node, const std::string& path)
{
    if (node.is_number()) {
        return node.get<double>();
    }
    return rational_of(node, path).to_double();
}

double number_at(const Json& values, const std::string& path) { return number_of(node_at(values, path), path); }

std::int64_t integer_at(const Json& values, const std::string& path)
{
    const Json& n = node_at(values, path);
    if (n.is_number_integer()) {
        return n.get<std::int64_t>();
    }
    const Rational r = rational_of(n, path);
    if (!r.is_integer() || !r.numerator().fits_slong_p()) {
        throw ConfigError("field '" + path + "' must be an integer");
    }
    return r.numerator().get_si();
}

std::string string_at(const Json& values, const std::string& path)
{
    const Json& n = node_at(values, path);
    if (!n.is_string()) {
        throw ConfigError("field '" + path + "' must be a string");
    }
    return n.get<std::string>();
}

bool bool_at(const Json& values, const std::string& path, bool fallback)
{
    if (!has(values, path)) {
        return fallback;
    }
    const Json& n = node_at(values, path);
    if (!n.is_boolean()) {
        throw ConfigError("field '" + path + "' must be true or false");
    }
    return n.get<bool>();
}

std::vector<Rational> rational_list_of(const Json& node, const std::string& path)
{
    if (!node.is_array()) {
        throw ConfigError("field '" + path + "' must be an array");
    }
    std::vector<Rational> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(rational_of(node[i], path + "." + std::to_string(i)));
    }
    return out;
}

Vec vec_of(const Json& node, const std::string& path)
{
    const auto list = rational_list_of(node, path);
    if (list.empty() || list.size() > static_cast<std::size_t>(kMaxDim)) {
        throw ConfigError("field '" + path + "' must have 1 to 4 coordinates");
    }
    Vec v(static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = list[i].to_double();
    }
    return v;
}

Box box_of(const Json& node, const std::string& path)
{
    const Vec lo = vec_of(member(node, path, "lo"), join(path, "lo"));
    const Vec hi = vec_of(member(node, path, "hi"), join(path, "hi"));
    if (lo.size() != hi.size()) {
        throw ConfigError("field '" + path + "': lo and hi differ in dimension");
    }
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        if (!(lo[k] < hi[k])) {
            throw ConfigError("field '" + path + "' is degenerate along axis " + std::to_string(k));
        }
    }
    return Box(lo, hi);
}

sets::SetDescription build_set(const Json& node, const std::string& path)
{
    if (!node.is_object()) {
        throw ConfigError("field '" + path + "' must be an object");
    }
    const std::string variant = string_at(node, "variant");
    auto topology = [&](sets::Topology fallback) {
        if (!node.contains("topology")) {
            return fallback;
        }
        const std::string t = string_at(node, "topology");
        if (t == "open") {
            return sets::Topology::open;
        }
        if (t == "closed") {
            return sets::Topology::closed;
        }
        throw ConfigError("field '" + join(path, "topology") + "' must be \"open\" or \"closed\"");
    };
    try {
        if (variant == "box") {
            return sets::make_box(box_of(node, path), topology(sets::Topology::closed));
        }
        if (variant == "disk") {
            const Vec c = vec_of(member(node, path, "center"), join(path, "center"));
            const Rational r = rational_of(member(node, path, "radius"), join(path, "radius"));
            if (r.sign() <= 0) {
                throw ConfigError("field '" + join(path, "radius") + "' must be positive");
            }
            return sets::make_disk(c, r.to_double(), topology(sets::Topology::open));
        }
        if (variant == "half_space") {
            const Vec nrm = vec_of(member(node, path, "normal"), join(path, "normal"));
            const double off = rational_of(member(node, path, "offset"), join(path, "offset")).to_double();
            return sets::make_half_space(nrm, off, topology(sets::Topology::open));
        }
        if (variant == "ex_plane" || variant == "ex_unbounded") {
            const std::int64_t n = integer_at(node, "N");
            if (n < 0) {
                throw ConfigError("field '" + join(path, "N") + "' must be nonnegative");
            }
            const auto un = static_cast<std::uint64_t>(n);
            return variant == "ex_plane" ? sets::example_plane_set(un) : sets::example_unbounded_set(un);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("field '" + path + "': " + e.what());
    }
    throw ConfigError("field '" + join(path, "variant") + "': unknown set variant '" + variant + "'");
}

flow::VectorField build_field(const Json& node, const std::string& path)
{
    if (!node.is_object()) {
        throw ConfigError("field '" + path + "' must be an object");
    }
    const std::string variant = string_at(node, "variant");
    std::optional<flow::VectorField> field;
    try {
        if (variant == "constant") {
            field = flow::VectorField::constant(vec_of(member(node, path, "vector"), join(path, "vector")));
        } else if (variant == "linear") {
            const Json& rows = member(node, path, "matrix");
            if (!rows.is_array() || rows.empty() || rows.size() > static_cast<std::size_t>(kMaxDim)) {
                throw ConfigError("field '" + join(path, "matrix") + "' must be a list of 1 to 4 rows");
            }
            const auto n = static_cast<Eigen::Index>(rows.size());
            Mat a(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const std::string rp = join(path, "matrix." + std::to_string(i));
                const Vec row = vec_of(rows[static_cast<std::size_t>(i)], rp);
                if (row.size() != n) {
                    throw ConfigError("field '" + rp + "' has the wrong length");
                }
                a.row(i) = row.transpose();
            }
            field = flow::VectorField::linear(a);
        } else if (variant == "rotation") {
            field = flow::VectorField::rotation(rational_of(member(node, path, "omega"), join(path, "omega")).to_double());
        } else if (variant == "radial") {
            const int dim = node.contains("dim") ? static_cast<int>(integer_at(node, "dim")) : 2;
            const bool extend = node.contains("extend_by_zero") ? bool_at(node, "extend_by_zero", true) : true;
            field = flow::VectorField::radial(dim, extend);
        } else {
            throw ConfigError("field '" + join(path, "variant") + "': unknown field variant '" + variant + "'");
        }
        if (node.contains("shift")) {
            field = flow::VectorField::shifted(*field, vec_of(node.at("shift"), join(path, "shift")));
        }
        if (node.contains("scale")) {
            field = flow::VectorField::scaled(*field, rational_of(node.at("scale"), join(path, "scale")).to_double());
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("field '" + path + "': " + e.what());
    }
    return *field;
}

}  // namespace funnel::scenarios
