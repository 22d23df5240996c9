// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "funnel/density/density.hpp"
#include "funnel/evolute/evolute.hpp"
#include "funnel/evolute/lemma.hpp"
#include "funnel/exact/cantor.hpp"
#include "funnel/flow/flow_checks.hpp"
#include "funnel/scenarios/config.hpp"
#include "funnel/scenarios/scenarios.hpp"
#include "support/generators.hpp"

using funnel::Box;
using funnel::make_vec;
using funnel::Mat;
using funnel::Vec;
using funnel::exact::Rational;
using funnel::flow::VectorField;
namespace ev = funnel::evolute;
namespace ex = funnel::exact;
namespace sc = funnel::scenarios;
namespace sets = funnel::sets;
namespace flow = funnel::flow;
namespace density = funnel::density;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            passed = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what)
    {
        if (passed) {
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

ev::GridSpec spec_from(const sc::Json& cfg, const Rational& h)
{
    return {sc::box_of(sc::node_at(cfg, "grid.box"), "grid.box"), h.to_double()};
}

std::vector<Rational> halvings(const Rational& from, const Rational& to)
{
    std::vector<Rational> hs;
    for (Rational h = from; h >= to; h = h / Rational(2)) {
        hs.push_back(h);
    }
    return hs;
}

// --- criteria -----------------------------------------------------------

Outcome cantor_measure()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto e8 = ex::k_measure_enclosure(8);
    o.require(e8.upper == Rational(203, 256) && e8.lower == Rational(203, 256) - Rational::pow2(-9),
              "N=8 enclosure is [" + e8.lower.str() + ", " + e8.upper.str() + "]");
    const auto e64 = ex::k_measure_enclosure(64);
    o.require(e64.width() <= Rational::pow2(-65), "N=64 width " + e64.width().str());
    o.require(e64.lower >= Rational(78, 100), "N=64 lower " + fmt(e64.lower.to_double()));
    for (std::uint64_t n = 1; n <= 64; ++n) {
        if (ex::k_measure_enclosure(n).lower < Rational(1, 2)) {
            o.require(false, "lower < 1/2 at N=" + std::to_string(n));
        }
    }
    const double t = seconds_since(start);
    o.require(t < 1.0, "runtime " + fmt(t) + " s");
    o.note("N=8 [405/512, 203/256], N=64 lower " + fmt(e64.lower.to_double()) + ", " + fmt(t) + " s");
    return o;
}

Outcome counterexample_boundary()
{
    Outcome o;
    const auto cfg = sc::make_config("ex-plane", std::nullopt, {}).values;
    const auto set = sets::example_plane_set(12);
    const auto v = VectorField::constant(make_vec({0, 1}));
    std::string uppers;
    for (const Rational h : {Rational(1, 64), Rational(1, 128), Rational(1, 256)}) {
        const auto start = std::chrono::steady_clock::now();
        const auto grid = ev::evolve_grid(set, v, 1.0, spec_from(cfg, h), {});
        const double upper = ev::boundary_measure_upper(grid).hi;
        const double t = seconds_since(start);
        o.require(upper >= 0.5, "upper " + fmt(upper) + " at h=" + h.str());
        o.require(t < 60.0, "runtime " + fmt(t) + " s at h=" + h.str());
        uppers += (uppers.empty() ? "" : ", ") + fmt(upper) + " (" + fmt(t) + " s)";
    }
    o.note("boundary upper " + uppers);
    return o;
}

Outcome decay_case(const std::string& id, const sets::SetDescription& set, const VectorField& field)
{
    Outcome o;
    const auto cfg = sc::make_config(id, std::nullopt, {}).values;
    const auto start = std::chrono::steady_clock::now();
    double prev = -1;
    std::string ratios;
    for (const auto& h : halvings(Rational(1, 32), Rational(1, 256))) {
        const double upper = ev::boundary_measure_upper(ev::evolve_grid(set, field, 1.0, spec_from(cfg, h), {})).hi;
        if (prev > 0) {
            const double ratio = upper / prev;
            o.require(upper <= 0.7 * prev, id + " ratio " + fmt(ratio) + " at h=" + h.str());
            ratios += (ratios.empty() ? "" : ", ") + fmt(ratio);
        }
        prev = upper;
    }
    const double t = seconds_since(start);
    o.require(t < 60.0, id + " runtime " + fmt(t) + " s");
    o.note(id + " ratios " + ratios + " (" + fmt(t) + " s)");
    return o;
}

Outcome theorem_positive_case()
{
    Outcome o;
    const auto square = decay_case("square-translation", sets::make_box(Box(make_vec({0, 0}), make_vec({1, 1}))),
                                   VectorField::constant(make_vec({0, 1})));
    const auto disk = decay_case("disk-rotation", sets::make_disk(make_vec({0.5, 0}), 0.25), VectorField::rotation(1));
    o.passed = square.passed && disk.passed;
    o.detail = square.detail + "; " + disk.detail;
    return o;
}

std::vector<VectorField> field_variants()
{
    Mat spiral(2, 2);
    spiral << -0.5, 1, -1, -0.5;
    return {VectorField::constant(make_vec({1, -0.5})), VectorField::linear(spiral),
            VectorField::linear(Mat::Identity(2, 2)), VectorField::rotation(1), VectorField::radial()};
}

Outcome gronwall()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    gen::Source g(4001);
    const Box box(make_vec({-1, -1}), make_vec({1, 1}));
    double worst = 0;
    for (const auto& field : field_variants()) {
        for (const double t : {0.5, 1.0}) {
            std::vector<flow::PointPair> pairs;
            while (pairs.size() < 1000) {
                const Vec x = g.point(box);
                const Vec y = g.point(box);
                if (x != y) {
                    pairs.push_back({x, y});
                }
            }
            const double ratio = flow::gronwall_check(field, pairs, t);
            const double bound = std::exp(field.lipschitz() * std::abs(t));
            o.require(ratio <= bound * (1 + 1e-6), field.describe() + " t=" + fmt(t) + " ratio " + fmt(ratio));
            worst = std::max(worst, ratio / bound);
        }
    }
    const double t = seconds_since(start);
    o.require(t < 5.0, "runtime " + fmt(t) + " s");
    o.note("max ratio/bound " + fmt(worst) + ", " + fmt(t) + " s");
    return o;
}

Outcome flow_accuracy()
{
    Outcome o;
    gen::Source g(5001);
    const double tol = flow::kDefaultFlowTol;
    const Box box(make_vec({-1, -1}), make_vec({1, 1}));
    double worst = 0;
    auto compare = [&](const std::string& name, const Vec& got, const Vec& want) {
        const double e = (got - want).norm();
        worst = std::max(worst, e);
        o.require(e <= 1e-8, name + " error " + fmt(e));
    };
    flow::IntegratorOptions numeric;
    const auto rot = VectorField::rotation(1);
    const auto grow = VectorField::linear(Mat::Identity(2, 2));
    Mat one(1, 1);
    one << 1.0;
    for (int k = 0; k < 100; ++k) {
        const Vec x = g.point(box);
        const double t = g.uniform(0, 1);
        const Vec turned = make_vec({std::cos(t) * x[0] - std::sin(t) * x[1], std::sin(t) * x[0] + std::cos(t) * x[1]});
        compare("rotation flow_map", flow::flow_map(rot, x, t), turned);
        compare("rotation integrator", flow::integrate_adaptive(rot, x, t, numeric), turned);
        compare("exponential flow_map", flow::flow_map(grow, x, t), std::exp(t) * x);
        compare("exponential integrator", flow::integrate_adaptive(grow, x, t, numeric), std::exp(t) * x);
        compare("scalar exponential", flow::flow_map(VectorField::linear(one), make_vec({x[0]}), t),
                make_vec({std::exp(t) * x[0]}));
    }
    double residual = 0;
    for (const auto& field : field_variants()) {
        for (int k = 0; k < 100; ++k) {
            const Vec x = g.point(box);
            const double t = g.uniform(0, 1);
            const double r = flow::inverse_consistency(field, x, t, tol);
            // numeric round trip, bypassing the closed forms
            const Vec back = flow::integrate_adaptive(field, flow::integrate_adaptive(field, x, t, numeric), -t, numeric);
            const double rn = (back - x).norm();
            residual = std::max({residual, r, rn});
            o.require(r <= 2 * tol && rn <= 2 * tol,
                      field.describe() + " residual " + fmt(std::max(r, rn)));
        }
    }
    o.note("max oracle error " + fmt(worst) + ", max inverse residual " + fmt(residual));
    return o;
}

Outcome lemma_inclusion()
{
    Outcome o;
    const auto cfg = sc::make_config("lemma-inclusion", std::nullopt, {}).values;
    const sc::Json& cases = sc::node_at(cfg, "cases");
    std::string counts;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string p = "cases." + std::to_string(i);
        const auto r = ev::lemma_inclusion_check(
            sc::build_set(sc::node_at(cfg, p + ".set"), p), sc::build_field(sc::node_at(cfg, p + ".field"), p),
            sc::rational_at(cfg, p + ".t").to_double(),
            {sc::box_of(sc::node_at(cfg, p + ".box"), p), sc::rational_at(cfg, p + ".h").to_double()}, {});
        const std::string name = sc::string_at(cfg, p + ".name");
        o.require(r.violations == 0, name + " has " + std::to_string(r.violations) + " violations");
        counts += (counts.empty() ? "" : ", ") + name + " 0/" + std::to_string(r.candidates);
    }
    o.require(cases.size() == 3, "expected three cases");
    o.note(counts);
    return o;
}

Outcome density_classification()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto half = sets::make_half_space(make_vec({0, 1}), 0.0);
    for (int depth = 1; depth <= 10; ++depth) {
        const auto p = density::density_profile(half, make_vec({0, 0}), {1.0}, depth);
        o.require(p.samples[0].ratio.contains(0.5), "half-space ratio misses 1/2 at depth " + std::to_string(depth));
    }
    const auto cert = ex::certify_point_in_k(Rational(2, 3), 16);
    o.require(cert.verdict == ex::KVerdict::certified, "2/3 not certified");
    const double r = std::ldexp(1.0, -10);
    const auto p = density::density_profile(sets::example_plane_set(16), make_vec({2.0 / 3.0, 0}), {r}, 12);
    const double lower = p.samples[0].ratio.lo;
    o.require(lower >= 0.99, "complement density lower bound " + fmt(lower));
    const double t = seconds_since(start);
    o.require(t < 30.0, "runtime " + fmt(t) + " s");
    o.note("2/3 certified, lower bound " + fmt(lower) + " at r=2^-10, " + fmt(t) + " s");
    return o;
}

Outcome invariance()
{
    Outcome o;
    const auto cfg = sc::make_config("prop-invariance", std::nullopt, {});
    auto report = sc::run_scenario(cfg);
    const auto& res = report.results();
    const auto points = res["total_points"].get<std::size_t>();
    const auto flips = res["total_flips"].get<std::size_t>();
    o.require(points >= 20, std::to_string(points) + " points");
    o.require(flips == 0, std::to_string(flips) + " flips");
    bool half = false;
    bool corner = false;
    bool plane = false;
    for (const auto& g : res["groups"]) {
        const std::string name = g["name"];
        half = half || name == "half-space";
        plane = plane || name == "ex-plane";
        if (name == "square") {
            for (const auto& p : g["points"]) {
                corner = corner || (p["point"][0] == "0" && p["point"][1] == "0");
            }
        }
    }
    o.require(half && corner && plane, "suite lacks half-space, square corner or ex-plane points");
    o.note(std::to_string(points) + " points, 0 flips");
    return o;
}

Outcome open_interval()
{
    Outcome o;
    const auto cfg = sc::make_config("square-translation", std::nullopt, {}).values;
    const auto set = sets::make_box(Box(make_vec({0, 0}), make_vec({1, 1})));
    const auto v = VectorField::constant(make_vec({0, 1}));
    ev::EvoluteOptions closed;
    ev::EvoluteOptions open;
    open.mode = ev::TimeMode::open;
    for (const Rational h : {Rational(1, 32), Rational(1, 64), Rational(1, 128)}) {
        const auto spec = spec_from(cfg, h);
        const auto gc = ev::evolve_grid(set, v, 1.0, spec, closed);
        const auto go = ev::evolve_grid(set, v, 1.0, spec, open);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < gc.size(); ++i) {
            bad += go.at(i) == sets::Status::in && gc.at(i) != sets::Status::in ? 1 : 0;
        }
        o.require(bad == 0, std::to_string(bad) + " open-only IN cells at h=" + h.str());
        const double bands = ev::boundary_measure_upper(ev::membership_grid(set, spec)).hi +
                             ev::boundary_measure_upper(ev::pushforward_set_grid(set, v, 1.0, spec)).hi;
        const double bo = ev::boundary_measure_upper(go).hi;
        const double bc = ev::boundary_measure_upper(gc).hi;
        o.require(bo <= bc + bands, "open " + fmt(bo) + " > closed " + fmt(bc) + " + bands " + fmt(bands));
        o.note("h=" + h.str() + ": open " + fmt(bo) + " <= " + fmt(bc + bands));
    }
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism()
{
    Outcome o;
    const auto root = std::filesystem::temp_directory_path() / "funnel_acceptance_determinism";
    std::filesystem::remove_all(root);
    struct Run {
        std::string id;
        std::vector<std::string> overrides;
    };
    const std::vector<Run> runs = {{"square-translation", {"grid.resolutions=[\"1/32\", \"1/64\"]"}},
                                   {"ex-plane", {"grid.h=1/64"}},
                                   {"radial-disk", {}},
                                   {"prop-invariance", {}},
                                   {"density-profile", {}},
                                   {"cantor-measure", {}},
                                   {"flow-properties", {}}};
    std::size_t files = 0;
    for (const auto& run : runs) {
        const auto cfg = sc::make_config(run.id, std::nullopt, run.overrides);
        const auto a = root / (run.id + "_a");
        const auto b = root / (run.id + "_b");
        setenv("FUNNEL_THREADS", "1", 1);
        sc::run_scenario(cfg, {a.string()});
        setenv("FUNNEL_THREADS", "3", 1);
        sc::run_scenario(cfg, {b.string()});
        unsetenv("FUNNEL_THREADS");
        for (const auto& entry : std::filesystem::directory_iterator(a)) {
            const auto name = entry.path().filename();
            if (name == "timings.json") {
                continue;
            }
            ++files;
            o.require(slurp(entry.path()) == slurp(b / name), run.id + "/" + name.string() + " differs");
        }
    }
    std::filesystem::remove_all(root);
    o.note(std::to_string(files) + " files byte-identical across repeated runs and worker counts");
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1  Cantor residual measure enclosures", cantor_measure},
        {"AC2  ex-plane boundary stays above 1/2", counterexample_boundary},
        {"AC3  boundary decay for square and disk", theorem_positive_case},
        {"AC4  Gronwall expansion bound", gronwall},
        {"AC5  flow accuracy and inverse consistency", flow_accuracy},
        {"AC6  lemma inclusion", lemma_inclusion},
        {"AC7  density classification", density_classification},
        {"AC8  invariance under flow maps", invariance},
        {"AC9  open time window", open_interval},
        {"AC10 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.passed ? 0 : 1;
        std::printf("%s  %s  (%s)\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
