#include "funnel/scenarios/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "funnel/density/density.hpp"
#include "funnel/evolute/evolute.hpp"
#include "funnel/evolute/lemma.hpp"
#include "funnel/exact/cantor.hpp"
#include "funnel/flow/flow_checks.hpp"
#include "funnel/scenarios/render.hpp"

namespace funnel::scenarios {

using exact::Rational;
using evolute::GridSpec;
using evolute::OccupancyGrid;
using sets::Status;

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

struct Ctx {
    const Json& cfg;
    Report& report;
    std::string out_dir;
    bool rasters = true;
    bool svg = true;
    PgmFormat pgm = PgmFormat::p2;
    double tol = flow::kDefaultFlowTol;
};

std::string tag(const Rational& q)
{
    std::string s = q.str();
    for (char& c : s) {
        if (c == '/') {
            c = '-';
        }
    }
    return s;
}

Rational power(const Rational& h, int n)
{
    Rational v(1);
    for (int k = 0; k < n; ++k) {
        v *= h;
    }
    return v;
}

Rational cells_volume(std::size_t count, const Rational& h, int n)
{
    return Rational(static_cast<long long>(count)) * power(h, n);
}

Rational boundary_volume(const OccupancyGrid& grid, const Rational& h)
{
    const auto cand = grid.boundary_candidates();
    return cells_volume(static_cast<std::size_t>(std::count(cand.begin(), cand.end(), true)), h, grid.dim());
}

Rational exact_box_volume(const Json& box, const std::string& path)
{
    const auto lo = rational_list_of(node_at(box, "lo"), path + ".lo");
    const auto hi = rational_list_of(node_at(box, "hi"), path + ".hi");
    Rational v(1);
    for (std::size_t k = 0; k < lo.size(); ++k) {
        v *= hi[k] - lo[k];
    }
    return v;
}

void save_raster(Ctx& ctx, const OccupancyGrid& grid, const std::string& name, Json& entry)
{
    if (ctx.out_dir.empty() || !ctx.rasters || grid.dim() != 2) {
        return;
    }
    render_raster(grid, (std::filesystem::path(ctx.out_dir) / name).string(), ctx.pgm);
    ctx.report.add_artifact(name);
    entry["raster"] = name;
}

void save_svg(Ctx& ctx, const std::string& name, const std::string& content)
{
    if (ctx.out_dir.empty() || !ctx.svg) {
        return;
    }
    write_text_file((std::filesystem::path(ctx.out_dir) / name).string(), content);
    ctx.report.add_artifact(name);
}

evolute::EvoluteOptions evolute_options(const Ctx& ctx, const std::string& prefix)
{
    evolute::EvoluteOptions o;
    o.tol = ctx.tol;
    const std::string dkey = prefix.empty() ? "dtau" : prefix + ".dtau";
    const std::string mkey = prefix.empty() ? "mode" : prefix + ".mode";
    if (has(ctx.cfg, dkey)) {
        const Json& d = node_at(ctx.cfg, dkey);
        o.dtau = d.is_string() && d.get<std::string>() == "auto" ? 0.0 : number_of(d, dkey);
    } else if (has(ctx.cfg, "dtau")) {
        const Json& d = node_at(ctx.cfg, "dtau");
        o.dtau = d.is_string() && d.get<std::string>() == "auto" ? 0.0 : number_of(d, "dtau");
    }
    if (has(ctx.cfg, mkey)) {
        o.mode = evolute::parse_time_mode(string_at(ctx.cfg, mkey));
    } else if (has(ctx.cfg, "mode")) {
        o.mode = evolute::parse_time_mode(string_at(ctx.cfg, "mode"));
    }
    return o;
}

// IN, OUT and UNKNOWN counts cover the grid, and the cells tile the box exactly.
void check_partition(Ctx& ctx, const OccupancyGrid& grid, const Rational& h, const Rational& box_volume,
                     const std::string& label)
{
    const std::size_t total = grid.count(Status::in) + grid.count(Status::out) + grid.count(Status::unknown);
    const Rational tiled = cells_volume(grid.size(), h, grid.dim());
    ctx.report.add_check("partition " + label, "IN + OUT + UNKNOWN volumes equal the box volume",
                         total == grid.size() && tiled == box_volume,
                         {{"box_volume", exact_value(box_volume, recipe::literal(box_volume))},
                          {"tiled_volume", exact_value(tiled, recipe::grid_volume(grid.size(), h, grid.dim()))}});
}

void check_reference(Ctx& ctx, const OccupancyGrid& grid, const Rational& h, const Interval& ref,
                     const std::string& label)
{
    const double in = cells_volume(grid.count(Status::in), h, grid.dim()).to_double_down();
    const double in_unknown =
        cells_volume(grid.count(Status::in) + grid.count(Status::unknown), h, grid.dim()).to_double_up();
    ctx.report.add_check("area enclosure " + label, "IN volume <= area of S^t <= IN + UNKNOWN volume",
                         in <= ref.hi && ref.lo <= in_unknown,
                         {{"in", approx_value(in)},
                          {"in_plus_unknown", approx_value(in_unknown)},
                          {"reference", enclosure_value(ref.lo, ref.hi)}});
}

// Cells IN at the earlier time are never OUT at the later one.
std::size_t time_monotonicity_violations(const OccupancyGrid& earlier, const OccupancyGrid& later)
{
    std::size_t bad = 0;
    for (std::size_t i = 0; i < earlier.size(); ++i) {
        bad += earlier.at(i) == Status::in && later.at(i) == Status::out ? 1 : 0;
    }
    return bad;
}

Json profile_json(const density::DensityProfile& p)
{
    Json samples = Json::array();
    for (const auto& s : p.samples) {
        samples.push_back({{"radius", s.radius},
                           {"ratio", enclosure_value(s.ratio.lo, s.ratio.hi)},
                           {"area", enclosure_value(s.area.area.lo, s.area.area.hi)},
                           {"nodes", s.area.nodes}});
    }
    return samples;
}

// ---------------------------------------------------------------------------

void run_evolution_study(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    const auto set = build_set(node_at(cfg, "set"), "set");
    const auto field = build_field(node_at(cfg, "field"), "field");
    const Rational t = rational_at(cfg, "t");
    const Box box = box_of(node_at(cfg, "grid.box"), "grid.box");
    const Rational box_volume = exact_box_volume(node_at(cfg, "grid.box"), "grid.box");
    const auto hs = rational_list_of(node_at(cfg, "grid.resolutions"), "grid.resolutions");
    const auto opts = evolute_options(ctx, "");
    const auto ref = reference_area(node_at(cfg, "set"), node_at(cfg, "field"), t);
    const std::optional<Rational> decay =
        has(cfg, "checks.decay_ratio") ? std::optional(rational_at(cfg, "checks.decay_ratio")) : std::nullopt;
    const std::optional<Rational> floor =
        has(cfg, "checks.boundary_floor") ? std::optional(rational_at(cfg, "checks.boundary_floor")) : std::nullopt;

    std::optional<exact::MeasureEnclosure> k_content;
    if (string_at(cfg, "set.variant") == "ex_plane") {
        const auto n = static_cast<std::uint64_t>(integer_at(cfg, "set.N"));
        Stopwatch sw;
        k_content = exact::k_measure_enclosure(n);
        ctx.report.results()["k_measure"] =
            enclosure_value(*k_content, recipe::k_measure_lower(n), recipe::k_measure_upper(n));
        ctx.report.results()["removed_measure_unit"] =
            exact_value(exact::removed_intervals(n).clipped(0, 1).measure(), recipe::removed_measure(n, true));
        ctx.report.add_check("k content", "lower bound of the measure of K is at least 1/2",
                             k_content->lower >= Rational(1, 2),
                             {{"lower", exact_value(k_content->lower, recipe::k_measure_lower(n))}});
        if (has(cfg, "witness")) {
            const Rational w = rational_at(cfg, "witness");
            const auto cert = exact::certify_point_in_k(w, n);
            ctx.report.results()["witness"] = {{"x", w.str()},
                                               {"verdict", exact::to_string(cert.verdict)},
                                               {"explicit_checks", cert.explicit_checks},
                                               {"analytic_level", cert.analytic_level}};
        }
        save_svg(ctx, "removed_intervals.svg",
                 intervals_svg(exact::removed_intervals(n).intervals(), 0, 1,
                               "removed intervals O_" + std::to_string(n) + " on [0,1]"));
        ctx.report.add_timing("k_measure", sw.seconds());
    }

    Json rows = Json::array();
    std::optional<Rational> prev_boundary;
    std::optional<Rational> prev_unknown;
    std::string prev_label;
    for (const auto& h : hs) {
        const std::string label = "h=" + h.str();
        Stopwatch sw;
        const OccupancyGrid grid = evolute::evolve_grid(set, field, t.to_double(), GridSpec(box, h.to_double()), opts);
        ctx.report.add_timing("evolve " + label, sw.seconds());
        Json entry = grid_summary(grid, h);
        save_raster(ctx, grid, "evolute_h" + tag(h) + ".pgm", entry);
        check_partition(ctx, grid, h, box_volume, label);
        if (ref) {
            check_reference(ctx, grid, h, *ref, label);
        }
        const Rational b = boundary_volume(grid, h);
        const Rational unknown = cells_volume(grid.count(Status::unknown), h, grid.dim());
        if (decay && prev_boundary) {
            ctx.report.add_check("boundary decay " + label, "boundary upper(h) <= decay_ratio * boundary upper(2h)",
                                 b <= *decay * *prev_boundary,
                                 {{"upper", b.str()},
                                  {"previous", prev_boundary->str()},
                                  {"ratio", approx_value((b / *prev_boundary).to_double())}});
        }
        if (decay && prev_unknown) {
            ctx.report.add_check("unknown refinement " + label, "UNKNOWN volume does not grow under refinement",
                                 unknown <= *prev_unknown, {{"unknown", unknown.str()}, {"previous", prev_unknown->str()}});
        }
        if (floor) {
            ctx.report.add_check("boundary floor " + label, "boundary upper bound >= boundary_floor", b >= *floor,
                                 {{"upper", b.str()}, {"floor", floor->str()}});
        }
        if (k_content && box.lo[0] <= 0.0 && box.hi[0] >= 1.0 && box.lo[1] <= 0.0 && box.hi[1] >= t.to_double()) {
            const Rational content = k_content->lower * t;
            ctx.report.add_check("dominates K content " + label,
                                 "boundary upper bound >= certified measure of K x [0,t]", b >= content,
                                 {{"upper", b.str()}, {"content", content.str()}});
        }
        prev_boundary = b;
        prev_unknown = unknown;
        rows.push_back(entry);
    }
    ctx.report.results()["grids"] = rows;
    if (ref) {
        ctx.report.results()["reference_area"] = enclosure_value(ref->lo, ref->hi);
    }

    if (string_at(cfg, "set.variant") == "ex_plane" && !hs.empty()) {
        const Rational h = hs.back();
        const OccupancyGrid s_grid = evolute::membership_grid(set, GridSpec(box, h.to_double()));
        Json entry = grid_summary(s_grid, h);
        save_raster(ctx, s_grid, "set_h" + tag(h) + ".pgm", entry);
        ctx.report.results()["initial_set"] = entry;
    }
}

void run_time_series(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    const auto set = build_set(node_at(cfg, "set"), "set");
    const auto field = build_field(node_at(cfg, "field"), "field");
    const auto times = rational_list_of(node_at(cfg, "times"), "times");
    const Box box = box_of(node_at(cfg, "grid.box"), "grid.box");
    const Rational box_volume = exact_box_volume(node_at(cfg, "grid.box"), "grid.box");
    const auto hs = rational_list_of(node_at(cfg, "grid.resolutions"), "grid.resolutions");
    const auto opts = evolute_options(ctx, "");

    Json series = Json::array();
    for (const auto& h : hs) {
        Json trend = Json::array();
        std::optional<OccupancyGrid> prev;
        Rational prev_t;
        for (const auto& t : times) {
            const std::string label = "h=" + h.str() + " t=" + t.str();
            Stopwatch sw;
            OccupancyGrid grid = evolute::evolve_grid(set, field, t.to_double(), GridSpec(box, h.to_double()), opts);
            ctx.report.add_timing("evolve " + label, sw.seconds());
            Json entry = grid_summary(grid, h);
            entry["t"] = t.str();
            save_raster(ctx, grid, "evolute_h" + tag(h) + "_t" + tag(t) + ".pgm", entry);
            check_partition(ctx, grid, h, box_volume, label);
            if (const auto ref = reference_area(node_at(cfg, "set"), node_at(cfg, "field"), t)) {
                check_reference(ctx, grid, h, *ref, label);
                entry["reference_area"] = enclosure_value(ref->lo, ref->hi);
            }
            if (prev) {
                const auto bad = time_monotonicity_violations(*prev, grid);
                ctx.report.add_check("time monotonicity " + label,
                                     "IN cells at t=" + prev_t.str() + " are never OUT at t=" + t.str(), bad == 0,
                                     {{"violations", bad}});
            }
            trend.push_back(entry);
            prev = std::move(grid);
            prev_t = t;
        }
        series.push_back({{"h", h.str()}, {"trend", trend}});
    }
    ctx.report.results()["series"] = series;
}

void run_open_interval(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    const auto set = build_set(node_at(cfg, "set"), "set");
    const auto field = build_field(node_at(cfg, "field"), "field");
    const Rational t = rational_at(cfg, "t");
    const Box box = box_of(node_at(cfg, "grid.box"), "grid.box");
    const auto hs = rational_list_of(node_at(cfg, "grid.resolutions"), "grid.resolutions");
    auto closed_opts = evolute_options(ctx, "");
    closed_opts.mode = evolute::TimeMode::closed;
    auto open_opts = closed_opts;
    open_opts.mode = evolute::TimeMode::open;

    Json rows = Json::array();
    for (const auto& h : hs) {
        const std::string label = "h=" + h.str();
        const GridSpec spec(box, h.to_double());
        Stopwatch sw;
        const OccupancyGrid closed = evolute::evolve_grid(set, field, t.to_double(), spec, closed_opts);
        const OccupancyGrid open = evolute::evolve_grid(set, field, t.to_double(), spec, open_opts);
        const OccupancyGrid start = evolute::membership_grid(set, spec);
        const OccupancyGrid end = evolute::pushforward_set_grid(set, field, t.to_double(), spec, ctx.tol);
        ctx.report.add_timing("grids " + label, sw.seconds());

        std::size_t not_nested = 0;
        for (std::size_t i = 0; i < open.size(); ++i) {
            not_nested += open.at(i) == Status::in && closed.at(i) != Status::in ? 1 : 0;
        }
        ctx.report.add_check("open inside closed " + label, "IN(open) is contained in IN(closed) cellwise",
                             not_nested == 0, {{"violations", not_nested}});

        const Rational b_open = boundary_volume(open, h);
        const Rational b_closed = boundary_volume(closed, h);
        const Rational band_start = boundary_volume(start, h);
        const Rational band_end = boundary_volume(end, h);
        ctx.report.add_check("open boundary " + label,
                             "boundary upper(open) <= boundary upper(closed) + endpoint slab bands",
                             b_open <= b_closed + band_start + band_end,
                             {{"open", b_open.str()},
                              {"closed", b_closed.str()},
                              {"band_start", band_start.str()},
                              {"band_end", band_end.str()}});
        Json entry = {{"h", h.str()}, {"closed", grid_summary(closed, h)}, {"open", grid_summary(open, h)},
                      {"start_band", exact_value(band_start, recipe::grid_volume(
                                                                 static_cast<std::uint64_t>((band_start / power(h, 2)).numerator().get_ui()), h, 2))},
                      {"end_band", exact_value(band_end, recipe::grid_volume(
                                                             static_cast<std::uint64_t>((band_end / power(h, 2)).numerator().get_ui()), h, 2))}};
        save_raster(ctx, closed, "closed_h" + tag(h) + ".pgm", entry["closed"]);
        save_raster(ctx, open, "open_h" + tag(h) + ".pgm", entry["open"]);
        rows.push_back(entry);
    }
    ctx.report.results()["grids"] = rows;
}

void run_lemma(Ctx& ctx)
{
    const Json& cases = node_at(ctx.cfg, "cases");
    Json rows = Json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string p = "cases." + std::to_string(i);
        const std::string name = has(ctx.cfg, p + ".name") ? string_at(ctx.cfg, p + ".name") : p;
        const auto set = build_set(node_at(ctx.cfg, p + ".set"), p + ".set");
        const auto field = build_field(node_at(ctx.cfg, p + ".field"), p + ".field");
        const Rational t = rational_at(ctx.cfg, p + ".t");
        const Box box = box_of(node_at(ctx.cfg, p + ".box"), p + ".box");
        const Rational h = rational_at(ctx.cfg, p + ".h");
        Stopwatch sw;
        const auto r = evolute::lemma_inclusion_check(set, field, t.to_double(), GridSpec(box, h.to_double()),
                                                      evolute_options(ctx, p));
        ctx.report.add_timing("lemma " + name, sw.seconds());
        Json entry = {{"name", name},
                      {"h", h.str()},
                      {"violations", r.violations},
                      {"candidates", r.candidates},
                      {"band_cells", r.band_cells},
                      {"mapped_points", r.mapped_points},
                      {"threshold", approx_value(r.threshold)},
                      {"max_distance", approx_value(r.max_distance)}};
        ctx.report.add_check("lemma inclusion " + name,
                             "every boundary candidate of the S^t grid lies near the sweep of the S boundary band",
                             r.violations == 0, {{"violations", r.violations}, {"candidates", r.candidates}});
        rows.push_back(entry);
    }
    ctx.report.results()["cases"] = rows;
}

void run_prop_invariance(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    density::ClassifierParams params;
    params.theta = number_at(cfg, "theta");
    params.eta = number_at(cfg, "eta");
    const Json& groups = node_at(cfg, "groups");
    std::size_t total_points = 0;
    std::size_t total_flips = 0;
    Json rows = Json::array();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::string p = "groups." + std::to_string(g);
        const std::string name = has(cfg, p + ".name") ? string_at(cfg, p + ".name") : p;
        const Json& set_cfg = node_at(cfg, p + ".set");
        const auto set = build_set(set_cfg, p + ".set");
        const auto field = build_field(node_at(cfg, p + ".field"), p + ".field");
        const Rational t = rational_at(cfg, p + ".t");
        std::vector<Vec> points;
        const Json& pts = node_at(cfg, p + ".points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            points.push_back(vec_of(pts[i], p + ".points." + std::to_string(i)));
        }
        std::vector<double> radii;
        for (const auto& r : rational_list_of(node_at(cfg, p + ".radii"), p + ".radii")) {
            radii.push_back(r.to_double());
        }
        const int depth = static_cast<int>(integer_at(cfg, p + ".depth"));
        Stopwatch sw;
        const auto result =
            density::lipeomorphism_invariance_check(set, field, t.to_double(), points, radii, depth, params, ctx.tol);
        ctx.report.add_timing("invariance " + name, sw.seconds());

        const bool certify = bool_at(cfg, p + ".certify_x_axis", false) && string_at(set_cfg, "variant") == "ex_plane";
        Json entries = Json::array();
        for (std::size_t i = 0; i < result.points.size(); ++i) {
            const auto& ip = result.points[i];
            Json e = {{"point", pts[i]},
                      {"image", {ip.image[0], ip.image[1]}},
                      {"before", density::to_string(ip.before)},
                      {"after", density::to_string(ip.after)},
                      {"flip", ip.flip},
                      {"profile_before", profile_json(ip.profile_before)},
                      {"profile_after", profile_json(ip.profile_after)}};
            if (certify) {
                const auto x = rational_of(pts[i][0], p + ".points." + std::to_string(i) + ".0");
                const auto y = rational_of(pts[i][1], p + ".points." + std::to_string(i) + ".1");
                if (y.sign() == 0 && x >= Rational(0) && x <= Rational(1)) {
                    const auto n = static_cast<std::uint64_t>(integer_at(set_cfg, "N"));
                    e["in_k"] = exact::to_string(exact::certify_point_in_k(x, n).verdict);
                }
            }
            entries.push_back(e);
        }
        total_points += result.points.size();
        total_flips += result.flips;
        ctx.report.add_check("no flips " + name, "no point changes between LEBESGUE_LIKELY and NOT_LEBESGUE_LIKELY",
                             result.flips == 0, {{"flips", result.flips}, {"points", result.points.size()}});
        rows.push_back({{"name", name}, {"t", t.str()}, {"points", entries}});
    }
    const auto min_points = static_cast<std::size_t>(integer_at(cfg, "min_points"));
    ctx.report.add_check("suite size", "the point suite has at least min_points points", total_points >= min_points,
                         {{"points", total_points}, {"min_points", min_points}});
    ctx.report.results()["groups"] = rows;
    ctx.report.results()["total_points"] = total_points;
    ctx.report.results()["total_flips"] = total_flips;
}

void run_flow_properties(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    std::mt19937_64 rng(static_cast<std::uint64_t>(integer_at(cfg, "seed")));
    const auto n_pairs = static_cast<std::size_t>(integer_at(cfg, "pairs"));
    const auto n_points = static_cast<std::size_t>(integer_at(cfg, "points"));
    const auto times = rational_list_of(node_at(cfg, "times"), "times");
    const Box box = box_of(node_at(cfg, "sample_box"), "sample_box");
    const double accuracy = number_at(cfg, "accuracy");
    const double slack = number_at(cfg, "gronwall_slack");
    const double inverse_factor = number_at(cfg, "inverse_factor");
    const Json& fields = node_at(cfg, "fields");

    // Uniform samples from 53 random bits: identical on every platform.
    auto uniform = [&](double lo, double hi) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };
    auto sample = [&]() {
        Vec x(box.dim());
        for (int k = 0; k < box.dim(); ++k) {
            x[k] = uniform(box.lo[k], box.hi[k]);
        }
        return x;
    };

    Json rows = Json::array();
    for (std::size_t f = 0; f < fields.size(); ++f) {
        const std::string p = "fields." + std::to_string(f);
        const auto field = build_field(fields[f], p);
        if (field.dim() != box.dim()) {
            throw ConfigError("field '" + p + "' does not match the sample box dimension");
        }
        for (const auto& tq : times) {
            const double t = tq.to_double();
            const std::string label = field.describe() + " t=" + tq.str();
            Stopwatch sw;
            std::vector<flow::PointPair> pairs;
            while (pairs.size() < n_pairs) {
                Vec x = sample();
                Vec y = sample();
                if ((x - y).norm() > 0.0) {
                    pairs.push_back({x, y});
                }
            }
            const double ratio = flow::gronwall_check(field, pairs, t, ctx.tol);
            const double bound = flow::gronwall_bound(field, t);
            ctx.report.add_check("gronwall " + label, "max expansion ratio <= e^{L|t|} (1 + slack)",
                                 ratio <= bound * (1.0 + slack),
                                 {{"ratio", approx_value(ratio)}, {"bound", approx_value(bound)}});

            flow::IntegratorOptions io;
            io.tol = ctx.tol;
            double worst_inverse = 0.0;
            double worst_accuracy = 0.0;
            const auto closed = field.affine_flow(t);
            for (std::size_t i = 0; i < n_points; ++i) {
                const Vec x = sample();
                const Vec there = flow::integrate_adaptive(field, x, t, io);
                const Vec back = flow::integrate_adaptive(field, there, -t, io);
                worst_inverse = std::max(worst_inverse, (back - x).norm());
                if (closed) {
                    worst_accuracy = std::max(worst_accuracy, (there - closed->apply(x)).norm());
                }
            }
            ctx.report.add_check("inverse consistency " + label, "|Φ_{-t}(Φ_t(x)) - x| <= inverse_factor * tol",
                                 worst_inverse <= inverse_factor * ctx.tol,
                                 {{"residual", approx_value(worst_inverse)}, {"tol", ctx.tol}});
            Json row = {{"field", field.describe()},
                        {"t", tq.str()},
                        {"lipschitz", approx_value(field.lipschitz())},
                        {"gronwall_ratio", approx_value(ratio)},
                        {"gronwall_bound", approx_value(bound)},
                        {"inverse_residual", approx_value(worst_inverse)}};
            if (closed) {
                ctx.report.add_check("closed form " + label, "integrator matches the closed-form flow within accuracy",
                                     worst_accuracy <= accuracy,
                                     {{"error", approx_value(worst_accuracy)}, {"accuracy", accuracy}});
                row["closed_form_error"] = approx_value(worst_accuracy);
            }
            ctx.report.add_timing("flow " + label, sw.seconds());
            rows.push_back(row);
        }
    }
    ctx.report.results()["fields"] = rows;
}

void run_density_profile(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    density::ClassifierParams params;
    params.theta = number_at(cfg, "theta");
    params.eta = number_at(cfg, "eta");

    {
        const auto set = build_set(node_at(cfg, "half_space.set"), "half_space.set");
        const Vec x = vec_of(node_at(cfg, "half_space.point"), "half_space.point");
        const double r = number_at(cfg, "half_space.radius");
        const Json& depths = node_at(cfg, "half_space.depths");
        const Interval vol = density::ball_volume(set.dim(), r);
        Json rows = Json::array();
        bool all = true;
        Stopwatch sw;
        for (std::size_t i = 0; i < depths.size(); ++i) {
            const int d = static_cast<int>(integer_at(cfg, "half_space.depths." + std::to_string(i)));
            const auto a = density::area_enclosure(set, x, r, d);
            const Interval ratio = (Interval::point(1.0) - a.area / vol).clamped(0.0, 1.0);
            const bool ok = ratio.contains(0.5);
            all = all && ok;
            rows.push_back({{"depth", d},
                            {"area", enclosure_value(a.area.lo, a.area.hi)},
                            {"ratio", enclosure_value(ratio.lo, ratio.hi)},
                            {"nodes", a.nodes}});
        }
        ctx.report.add_timing("half-space depths", sw.seconds());
        ctx.report.add_check("half-space symmetry", "ratio enclosure contains 1/2 at every depth", all);
        ctx.report.results()["half_space"] = rows;
    }
    {
        const Json& set_cfg = node_at(cfg, "witness.set");
        const auto set = build_set(set_cfg, "witness.set");
        const Json& pnode = node_at(cfg, "witness.point");
        const Vec x = vec_of(pnode, "witness.point");
        std::vector<double> radii;
        for (const auto& r : rational_list_of(node_at(cfg, "witness.radii"), "witness.radii")) {
            radii.push_back(r.to_double());
        }
        const int depth = static_cast<int>(integer_at(cfg, "witness.depth"));
        const Rational min_ratio = rational_at(cfg, "witness.min_ratio");

        Json result = Json::object();
        if (string_at(set_cfg, "variant") == "ex_plane") {
            const Rational px = rational_of(pnode[0], "witness.point.0");
            const auto n = static_cast<std::uint64_t>(integer_at(set_cfg, "N"));
            const auto cert = exact::certify_point_in_k(px, n);
            result["certificate"] = {{"x", px.str()},
                                     {"verdict", exact::to_string(cert.verdict)},
                                     {"explicit_checks", cert.explicit_checks},
                                     {"analytic_level", cert.analytic_level},
                                     {"detail", cert.detail}};
            ctx.report.add_check("witness in K", "certify_point_in_k certifies the witness abscissa",
                                 cert.verdict == exact::KVerdict::certified);
        }
        Stopwatch sw;
        const auto profile = density::density_profile(set, x, radii, depth);
        ctx.report.add_timing("witness profile", sw.seconds());
        const auto cls = density::classify_lebesgue_of_complement(profile, params);
        result["profile"] = profile_json(profile);
        result["profile_triples"] = density::profile_to_json(profile);
        result["classification"] = density::to_string(cls);
        ctx.report.add_check("witness density", "complement-density lower bound at the smallest radius >= min_ratio",
                             profile.samples.back().ratio.lo >= min_ratio.to_double(),
                             {{"lower", approx_value(profile.samples.back().ratio.lo)}, {"min_ratio", min_ratio.str()}});
        ctx.report.add_check("witness classification", "witness classifies as LEBESGUE_LIKELY",
                             cls == density::LebesgueClass::lebesgue_likely);
        save_svg(ctx, "witness_profile.svg", density::profile_svg(profile, "complement density ratio"));
        ctx.report.results()["witness"] = result;
    }
}

void run_cantor(Ctx& ctx)
{
    const Json& cfg = ctx.cfg;
    const Rational floor = rational_at(cfg, "floor");
    const Json& levels = node_at(cfg, "levels");
    Json rows = Json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto n = static_cast<std::uint64_t>(integer_at(cfg, "levels." + std::to_string(i)));
        Stopwatch sw;
        const auto e = exact::k_measure_enclosure(n);
        ctx.report.add_timing("k_measure n=" + std::to_string(n), sw.seconds());
        rows.push_back({{"n", n},
                        {"enclosure", enclosure_value(e, recipe::k_measure_lower(n), recipe::k_measure_upper(n))},
                        {"removed_measure_unit",
                         exact_value(exact::removed_intervals(n).clipped(0, 1).measure(), recipe::removed_measure(n, true))},
                        {"tail_bound", exact_value(exact::tail_length_bound(n), recipe::tail_length_bound(n))},
                        {"width", e.width().str()}});
        ctx.report.add_check("floor n=" + std::to_string(n), "lower bound >= floor", e.lower >= floor,
                             {{"lower", exact_value(e.lower, recipe::k_measure_lower(n))}, {"floor", floor.str()}});
    }
    ctx.report.results()["levels"] = rows;

    const Json& expect = node_at(cfg, "expect");
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const std::string p = "expect." + std::to_string(i);
        const auto n = static_cast<std::uint64_t>(integer_at(cfg, p + ".n"));
        const auto e = exact::k_measure_enclosure(n);
        const Rational lo = rational_at(cfg, p + ".lower");
        const Rational hi = rational_at(cfg, p + ".upper");
        ctx.report.add_check("expected n=" + std::to_string(n), "enclosure equals the expected exact interval",
                             e.lower == lo && e.upper == hi,
                             {{"lower", e.lower.str()}, {"upper", e.upper.str()}});
    }
    const Json& widths = node_at(cfg, "width_bounds");
    for (std::size_t i = 0; i < widths.size(); ++i) {
        const std::string p = "width_bounds." + std::to_string(i);
        const auto n = static_cast<std::uint64_t>(integer_at(cfg, p + ".n"));
        const auto e = exact::k_measure_enclosure(n);
        const Rational bound = Rational::pow2(static_cast<long>(integer_at(cfg, p + ".max_width_log2")));
        const Rational min_lower = rational_at(cfg, p + ".min_lower");
        ctx.report.add_check("width n=" + std::to_string(n), "width <= 2^max_width_log2 and lower >= min_lower",
                             e.width() <= bound && e.lower >= min_lower,
                             {{"width", e.width().str()}, {"bound", bound.str()}, {"lower", e.lower.str()}});
    }

    const auto cn = static_cast<std::uint64_t>(integer_at(cfg, "certify_n"));
    Json certs = Json::array();
    for (const auto& x : rational_list_of(node_at(cfg, "points"), "points")) {
        const auto c = exact::certify_point_in_k(x, cn);
        Json e = {{"x", x.str()}, {"verdict", exact::to_string(c.verdict)}, {"detail", c.detail}};
        if (c.witness_index) {
            e["witness_index"] = *c.witness_index;
        }
        certs.push_back(e);
    }
    ctx.report.results()["certificates"] = certs;

    const auto pn = static_cast<std::uint64_t>(integer_at(cfg, "picture_n"));
    save_svg(ctx, "removed_intervals.svg",
             intervals_svg(exact::removed_intervals(pn).intervals(), 0, 1,
                           "removed intervals O_" + std::to_string(pn) + " on [0,1]"));
}

}  // namespace

std::optional<Interval> reference_area(const Json& set, const Json& field, const Rational& t)
{
    const std::string sv = set.value("variant", "");
    const std::string fv = field.value("variant", "");
    if (field.contains("shift") || field.contains("scale")) {
        return std::nullopt;
    }
    if (sv == "box" && fv == "constant") {
        const auto lo = rational_list_of(set.at("lo"), "set.lo");
        const auto hi = rational_list_of(set.at("hi"), "set.hi");
        const auto v = rational_list_of(field.at("vector"), "field.vector");
        if (lo.size() != 2 || v.size() != 2) {
            return std::nullopt;
        }
        const Rational wx = hi[0] - lo[0];
        const Rational wy = hi[1] - lo[1];
        const Rational area = wx * wy + t * (v[0].abs() * wy + v[1].abs() * wx);
        return Interval{area.to_double_down(), area.to_double_up()};
    }
    if (sv == "disk" && fv == "rotation") {
        const Vec c = vec_of(set.at("center"), "set.center");
        const double a = rational_of(set.at("radius"), "set.radius").to_double();
        const double theta = std::abs(rational_of(field.at("omega"), "field.omega").to_double() * t.to_double());
        const double d = c.norm();
        if (c.size() != 2 || !(d > a) || !(theta + 2.0 * std::asin(a / d) < 2.0 * std::numbers::pi)) {
            return std::nullopt;
        }
        const double area = 2.0 * d * a * theta + std::numbers::pi * a * a;
        return Interval{area * (1.0 - 1e-12), area * (1.0 + 1e-12)};
    }
    if (sv == "disk" && fv == "radial") {
        const Vec c = vec_of(set.at("center"), "set.center");
        if (c.size() != 2 || c.norm() != 0.0) {
            return std::nullopt;
        }
        const double big = rational_of(set.at("radius"), "set.radius").to_double() * std::exp(t.to_double());
        if (big > 0.5) {
            return std::nullopt;
        }
        const double area = std::numbers::pi * big * big;
        return Interval{area * (1.0 - 1e-12), area * (1.0 + 1e-12)};
    }
    return std::nullopt;
}

Report run_scenario(const ScenarioConfig& config, const RunOptions& options)
{
    Report report(config);
    Ctx ctx{config.values, report, options.out_dir};
    ctx.rasters = bool_at(config.values, "output.rasters", true);
    ctx.svg = bool_at(config.values, "output.svg", true);
    if (has(config.values, "output.pgm")) {
        ctx.pgm = parse_pgm_format(string_at(config.values, "output.pgm"));
    }
    if (has(config.values, "tolerance.flow")) {
        ctx.tol = number_at(config.values, "tolerance.flow");
    }
    if (!options.out_dir.empty()) {
        std::filesystem::create_directories(options.out_dir);
    }

    Stopwatch total;
    const std::string& id = config.scenario;
    if (id == "square-translation" || id == "disk-rotation" || id == "ex-plane") {
        run_evolution_study(ctx);
    } else if (id == "ex-unbounded" || id == "radial-disk") {
        run_time_series(ctx);
    } else if (id == "open-interval") {
        run_open_interval(ctx);
    } else if (id == "lemma-inclusion") {
        run_lemma(ctx);
    } else if (id == "prop-invariance") {
        run_prop_invariance(ctx);
    } else if (id == "flow-properties") {
        run_flow_properties(ctx);
    } else if (id == "density-profile") {
        run_density_profile(ctx);
    } else if (id == "cantor-measure") {
        run_cantor(ctx);
    } else {
        throw ConfigError("scenario '" + id + "' has no runner");
    }
    report.add_timing("total", total.seconds());
    if (!options.out_dir.empty()) {
        write_report(report, options.out_dir);
    }
    return report;
}

void write_report(const Report& report, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    write_text_file((std::filesystem::path(dir) / "report.json").string(), report.to_json().dump(2) + "\n");
    write_text_file((std::filesystem::path(dir) / "timings.json").string(), report.timings_json().dump(2) + "\n");
}

}  // namespace funnel::scenarios
