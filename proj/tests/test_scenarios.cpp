#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "funnel/exact/cantor.hpp"
#include "funnel/scenarios/config.hpp"
#include "funnel/scenarios/registry.hpp"
#include "funnel/scenarios/render.hpp"
#include "funnel/scenarios/report.hpp"
#include "funnel/scenarios/scenarios.hpp"

using funnel::Box;
using funnel::make_vec;
using funnel::exact::Rational;
using funnel::sets::Status;
namespace sc = funnel::scenarios;
namespace ev = funnel::evolute;

namespace {

std::filesystem::path temp_dir(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("funnel_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string error_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const sc::ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("registry")
{
    const auto& r = sc::registry();
    CHECK(r.size() >= 8);
    CHECK_NOTHROW(sc::find_scenario("ex-plane"));
    CHECK_NOTHROW(sc::find_scenario("lemma-inclusion"));
    const std::string msg = error_of([] { sc::find_scenario("no-such-scenario"); });
    CHECK(msg.find("square-translation") != std::string::npos);
    CHECK(msg.find("no-such-scenario") != std::string::npos);
    for (const auto& s : r) {
        CHECK_NOTHROW(sc::validate(s.defaults));
        CHECK_FALSE(s.description.empty());
    }
}

TEST_CASE("overrides")
{
    sc::Json v = sc::find_scenario("square-translation").defaults;
    sc::apply_override(v, "t=1/2");
    CHECK(v["t"] == "1/2");
    sc::apply_override(v, "grid.h=1/16");
    CHECK(v["grid"]["resolutions"] == sc::Json::array({"1/16"}));
    sc::apply_override(v, "output.rasters=false");
    CHECK(v["output"]["rasters"] == false);
    sc::apply_override(v, "set.N=5");
    CHECK(v["set"]["N"] == 5);
    CHECK_THROWS_AS(sc::apply_override(v, "novalue"), sc::ConfigError);

    const auto cfg = sc::make_config("square-translation", std::nullopt, {"mode=open", "grid.h=1/8"});
    CHECK(cfg.values["mode"] == "open");
    CHECK(cfg.values["scenario"] == "square-translation");
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"grid.h=0"}), sc::ConfigError);
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"grid.h=3/7"}), sc::ConfigError);
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"t=-1"}), sc::ConfigError);
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"mode=sideways"}), sc::ConfigError);
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"set.variant=torus"}), sc::ConfigError);
    CHECK_THROWS_AS(sc::make_config("square-translation", std::nullopt, {"tolerance.flow=0"}), sc::ConfigError);
}

TEST_CASE("config files")
{
    const auto dir = temp_dir("config");
    {
        std::ofstream(dir / "bad.json") << "{\n  \"t\": \"1\",\n  \"grid\": oops\n}\n";
        const std::string msg = error_of([&] { sc::load_config_file((dir / "bad.json").string()); });
        CHECK(msg.find("line 3") != std::string::npos);
    }
    {
        std::ofstream(dir / "ok.json") << R"({"t": "1/4", "grid": {"resolutions": ["1/16"]}})";
        const auto cfg = sc::make_config("square-translation", (dir / "ok.json").string(), {"t=1/2"});
        CHECK(cfg.values["t"] == "1/2");
        CHECK(cfg.values["grid"]["resolutions"].size() == 1);
        CHECK(cfg.values["grid"]["box"]["lo"][0] == "-1/2");
    }
    {
        std::ofstream(dir / "other.json") << R"({"scenario": "ex-plane"})";
        CHECK_THROWS_AS(sc::make_config("square-translation", (dir / "other.json").string(), {}), sc::ConfigError);
    }
    CHECK_THROWS_AS(sc::load_config_file((dir / "missing.json").string()), sc::ConfigError);
    const std::string msg = error_of([] { sc::make_config("square-translation", std::nullopt, {"set.lo=[\"x\", \"0\"]"}); });
    CHECK(msg.find("set.lo") != std::string::npos);
}

TEST_CASE("builders")
{
    const auto s = sc::build_set(sc::Json::parse(R"({"variant": "disk", "center": ["0", "0"], "radius": "1/2"})"), "set");
    CHECK(s.membership(make_vec({0, 0})).status == Status::in);
    const auto f = sc::build_field(
        sc::Json::parse(R"({"variant": "linear", "matrix": [["0", "1"], ["-1", "0"]], "shift": ["1", "0"]})"), "field");
    CHECK(f.eval(make_vec({1, 1})).isApprox(make_vec({1, 0})));
    CHECK(sc::rational_of("0.25", "x") == Rational(1, 4));
    CHECK(sc::rational_of(3, "x") == Rational(3));
    CHECK_THROWS_AS(sc::rational_of(0.1, "x"), sc::ConfigError);
}

TEST_CASE("rasters")
{
    ev::OccupancyGrid all_in(ev::GridSpec(Box(make_vec({0, 0}), make_vec({2, 2})), 1.0));
    for (std::size_t i = 0; i < all_in.size(); ++i) {
        all_in.set(i, Status::in);
    }
    CHECK(sc::raster_bytes(all_in) == "P2 2 2 255\n0 0\n0 0\n");

    ev::OccupancyGrid row(ev::GridSpec(Box(make_vec({0, 0}), make_vec({3, 1})), 1.0));
    row.set(0, Status::in);
    row.set(1, Status::unknown);
    row.set(2, Status::out);
    CHECK(sc::raster_bytes(row) == "P2 3 1 255\n0 128 255\n");
    CHECK(sc::raster_bytes(row, sc::PgmFormat::p5) == std::string("P5 3 1 255\n\x00\x80\xff", 14));

    // top row is the largest y
    ev::OccupancyGrid col(ev::GridSpec(Box(make_vec({0, 0}), make_vec({1, 2})), 1.0));
    col.set(0, Status::in);
    col.set(1, Status::out);
    CHECK(sc::raster_bytes(col) == "P2 1 2 255\n255\n0\n");

    ev::OccupancyGrid cube(ev::GridSpec(Box(make_vec({0, 0, 0}), make_vec({1, 1, 1})), 1.0));
    CHECK_THROWS(sc::raster_bytes(cube));
    CHECK_THROWS(sc::render_raster(row, "/nonexistent-dir/x.pgm"));
    CHECK(sc::parse_pgm_format("P5") == sc::PgmFormat::p5);
    CHECK_THROWS_AS(sc::parse_pgm_format("P6"), sc::ConfigError);
}

TEST_CASE("reference areas")
{
    const auto square = sc::Json::parse(R"({"variant": "box", "lo": ["0", "0"], "hi": ["1", "1"]})");
    const auto up = sc::Json::parse(R"({"variant": "constant", "vector": ["0", "1"]})");
    const auto a = sc::reference_area(square, up, 1);
    REQUIRE(a);
    CHECK(a->contains(2.0));
    const auto diag = sc::Json::parse(R"({"variant": "constant", "vector": ["1", "-1"]})");
    CHECK(sc::reference_area(square, diag, Rational(1, 2))->contains(2.0));

    const auto disk = sc::Json::parse(R"({"variant": "disk", "center": ["1/2", "0"], "radius": "1/4"})");
    const auto rot = sc::Json::parse(R"({"variant": "rotation", "omega": "1"})");
    CHECK(sc::reference_area(disk, rot, 1)->contains(0.25 + std::numbers::pi / 16));
    CHECK_FALSE(sc::reference_area(disk, rot, 6));

    const auto small = sc::Json::parse(R"({"variant": "disk", "center": ["0", "0"], "radius": "1/10"})");
    const auto radial = sc::Json::parse(R"({"variant": "radial"})");
    const double big = 0.1 * std::exp(1.0);
    CHECK(sc::reference_area(small, radial, 1)->contains(std::numbers::pi * big * big));
    CHECK_FALSE(sc::reference_area(small, radial, 2));
}

TEST_CASE("reports replay their exact values")
{
    const auto cfg = sc::make_config("cantor-measure", std::nullopt, {});
    const auto report = sc::run_scenario(cfg);
    CHECK(report.passed());
    auto doc = report.to_json();
    CHECK(doc["schema"] == sc::kReportSchema);
    const auto ok = sc::verify_report(doc);
    CHECK(ok.ok());
    CHECK(ok.checked > 5);

    doc["results"]["levels"][1]["enclosure"]["upper"]["value"] = "204/256";
    const auto bad = sc::verify_report(doc);
    CHECK_FALSE(bad.ok());
    CHECK(bad.mismatches.size() == 1);

    CHECK(sc::evaluate_recipe(sc::recipe::k_measure_upper(8)) == Rational(203, 256));
    CHECK(sc::evaluate_recipe(sc::recipe::grid_volume(12, Rational(1, 4), 2)) == Rational(3, 4));
    CHECK(sc::evaluate_recipe(sc::recipe::tail_length_bound(3)) == Rational(1, 16));
    CHECK(sc::evaluate_recipe(sc::recipe::removed_measure(8, false)) == Rational(85, 256));
    CHECK_THROWS_AS(sc::evaluate_recipe(sc::Json{{"op", "guess"}}), std::invalid_argument);
}

TEST_CASE("contract failures are reported, not thrown")
{
    // a floor the enclosure cannot reach
    const auto cfg = sc::make_config("cantor-measure", std::nullopt, {"floor=9/10"});
    const auto report = sc::run_scenario(cfg);
    CHECK_FALSE(report.passed());
    const auto dir = temp_dir("failing");
    sc::write_report(report, dir.string());
    CHECK(std::filesystem::exists(dir / "report.json"));
    CHECK(std::filesystem::exists(dir / "timings.json"));
}

TEST_CASE("small scenario runs write artifacts")
{
    const auto dir = temp_dir("square");
    const auto cfg = sc::make_config("square-translation", std::nullopt, {"grid.resolutions=[\"1/8\", \"1/16\"]"});
    const auto report = sc::run_scenario(cfg, {dir.string()});
    CHECK(report.passed());
    CHECK(std::filesystem::exists(dir / "evolute_h1-8.pgm"));
    CHECK(std::filesystem::exists(dir / "evolute_h1-16.pgm"));
    std::ifstream in(dir / "report.json");
    const auto doc = sc::Json::parse(in);
    CHECK(doc["passed"] == true);
    CHECK(doc["results"]["grids"].size() == 2);
    CHECK(doc["artifacts"].size() == 2);
    CHECK_FALSE(doc.contains("timings"));
    CHECK(sc::verify_report(doc).ok());
}

}  // TEST_SUITE
