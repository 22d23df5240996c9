#include "funnel/scenarios/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "funnel/exact/cantor.hpp"

namespace funnel::scenarios {

using exact::Rational;

Json exact_value(const Rational& value, Json recipe)
{
    return {{"kind", "exact"}, {"value", value.str()}, {"approx", value.to_double()}, {"recipe", std::move(recipe)}};
}

Json enclosure_value(double lower, double upper)
{
    return {{"kind", "enclosure"}, {"lower", lower}, {"upper", upper}};
}

Json enclosure_value(const exact::MeasureEnclosure& e, const Json& lower_recipe, const Json& upper_recipe)
{
    return {{"kind", "enclosure"},
            {"lower", exact_value(e.lower, lower_recipe)},
            {"upper", exact_value(e.upper, upper_recipe)}};
}

Json approx_value(double value) { return {{"kind", "float-approx"}, {"value", value}}; }

namespace recipe {

Json literal(const Rational& value) { return {{"op", "literal"}, {"value", value.str()}}; }

Json grid_volume(std::uint64_t count, const Rational& h, int dim)
{
    return {{"op", "grid_volume"}, {"count", count}, {"h", h.str()}, {"dim", dim}};
}

Json k_measure_lower(std::uint64_t n) { return {{"op", "k_measure_lower"}, {"n", n}}; }
Json k_measure_upper(std::uint64_t n) { return {{"op", "k_measure_upper"}, {"n", n}}; }

Json removed_measure(std::uint64_t n, bool clip_to_unit)
{
    return {{"op", "removed_measure"}, {"n", n}, {"clip_to_unit", clip_to_unit}};
}

Json tail_length_bound(std::uint64_t n) { return {{"op", "tail_length_bound"}, {"n", n}}; }

}  // namespace recipe

Rational evaluate_recipe(const Json& r)
{
    const std::string op = r.at("op").get<std::string>();
    if (op == "literal") {
        return Rational::parse(r.at("value").get<std::string>());
    }
    if (op == "grid_volume") {
        const Rational h = Rational::parse(r.at("h").get<std::string>());
        Rational v(static_cast<long long>(r.at("count").get<std::uint64_t>()));
        for (int k = 0; k < r.at("dim").get<int>(); ++k) {
            v *= h;
        }
        return v;
    }
    if (op != "k_measure_lower" && op != "k_measure_upper" && op != "removed_measure" && op != "tail_length_bound") {
        throw std::invalid_argument("unknown recipe '" + op + "'");
    }
    const auto n = r.at("n").get<std::uint64_t>();
    if (op == "k_measure_lower") {
        return exact::k_measure_enclosure(n).lower;
    }
    if (op == "k_measure_upper") {
        return exact::k_measure_enclosure(n).upper;
    }
    if (op == "removed_measure") {
        const auto u = exact::removed_intervals(n);
        return r.at("clip_to_unit").get<bool>() ? u.clipped(0, 1).measure() : u.measure();
    }
    if (op == "tail_length_bound") {
    }
    return exact::tail_length_bound(n);
}

Report::Report(ScenarioConfig config) : config_(std::move(config)) {}

void Report::add_check(std::string name, std::string contract, bool passed, Json values)
{
    checks_.push_back({std::move(name), std::move(contract), passed, std::move(values)});
}

bool Report::passed() const
{
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

Json Report::to_json() const
{
    Json checks = Json::array();
    for (const auto& c : checks_) {
        checks.push_back({{"name", c.name}, {"contract", c.contract}, {"passed", c.passed}, {"values", c.values}});
    }
    return {{"schema", kReportSchema},
            {"scenario", config_.scenario},
            {"config", config_.values},
            {"results", results_},
            {"checks", checks},
            {"passed", passed()},
            {"artifacts", artifacts_}};
}

Json Report::timings_json() const { return {{"scenario", config_.scenario}, {"seconds", timings_}}; }

Json grid_summary(const evolute::OccupancyGrid& grid, const Rational& h)
{
    const int n = grid.dim();
    Json counts = Json::object();
    Json volumes = Json::object();
    for (auto s : {sets::Status::in, sets::Status::out, sets::Status::unknown}) {
        const auto c = static_cast<std::uint64_t>(grid.count(s));
        Rational v(static_cast<long long>(c));
        for (int k = 0; k < n; ++k) {
            v *= h;
        }
        counts[sets::to_string(s)] = c;
        volumes[sets::to_string(s)] = exact_value(v, recipe::grid_volume(c, h, n));
    }
    const auto cand = grid.boundary_candidates();
    const auto bc = static_cast<std::uint64_t>(std::count(cand.begin(), cand.end(), true));
    Rational bv(static_cast<long long>(bc));
    for (int k = 0; k < n; ++k) {
        bv *= h;
    }
    Json box = {{"lo", Json::array()}, {"hi", Json::array()}};
    for (int k = 0; k < n; ++k) {
        box["lo"].push_back(grid.box().lo[k]);
        box["hi"].push_back(grid.box().hi[k]);
    }
    const auto& meta = grid.metadata();
    return {{"box", box},
            {"h", h.str()},
            {"cells", grid.size()},
            {"counts", counts},
            {"volumes", volumes},
            {"boundary_cells", bc},
            {"boundary_upper",
             {{"kind", "enclosure"},
              {"lower", exact_value(Rational(0), recipe::literal(Rational(0)))},
              {"upper", exact_value(bv, recipe::grid_volume(bc, h, n))}}},
            {"metadata", {{"kind", meta.kind}, {"t", meta.t}, {"dtau", meta.dtau}, {"mode", meta.mode}}}};
}

namespace {

void verify_node(const Json& node, const std::string& path, VerifyResult& out)
{
    if (node.is_object()) {
        if (node.contains("kind") && node["kind"] == "exact" && node.contains("recipe")) {
            ++out.checked;
            try {
                const Rational expected = evaluate_recipe(node["recipe"]);
                const Rational stated = Rational::parse(node.at("value").get<std::string>());
                if (!(expected == stated)) {
                    out.mismatches.push_back(path + ": stated " + stated.str() + ", recomputed " + expected.str());
                }
            } catch (const std::exception& e) {
                out.mismatches.push_back(path + ": " + e.what());
            }
            return;
        }
        for (const auto& [k, v] : node.items()) {
            verify_node(v, path + "/" + k, out);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            verify_node(node[i], path + "/" + std::to_string(i), out);
        }
    }
}

}  // namespace

VerifyResult verify_report(const Json& report)
{
    VerifyResult out;
    if (!report.is_object() || report.value("schema", "") != kReportSchema) {
        out.mismatches.push_back("not a " + std::string(kReportSchema) + " document");
        return out;
    }
    verify_node(report.at("results"), "/results", out);
    if (report.contains("checks")) {
        verify_node(report["checks"], "/checks", out);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

}  // namespace funnel::scenarios
