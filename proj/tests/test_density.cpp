#include <doctest.h>

#include <cmath>
#include <numbers>

#include "funnel/density/density.hpp"
#include "funnel/density/quadrature.hpp"
#include "support/generators.hpp"

using funnel::Box;
using funnel::Interval;
using funnel::make_vec;
using funnel::Vec;
using funnel::density::DensityProfile;
using funnel::density::DensitySample;
using funnel::density::LebesgueClass;
using funnel::flow::VectorField;
namespace density = funnel::density;
namespace sets = funnel::sets;

namespace {

// Area of the intersection of two disks with radii r and s at distance d.
double lens_area(double r, double s, double d)
{
    if (d >= r + s) {
        return 0.0;
    }
    if (d <= std::abs(r - s)) {
        const double m = std::min(r, s);
        return std::numbers::pi * m * m;
    }
    const double a = r * r * std::acos((d * d + r * r - s * s) / (2 * d * r));
    const double b = s * s * std::acos((d * d + s * s - r * r) / (2 * d * s));
    const double c = 0.5 * std::sqrt((-d + r + s) * (d + r - s) * (d - r + s) * (d + r + s));
    return a + b - c;
}

DensityProfile synthetic(std::initializer_list<std::pair<double, double>> ratios)
{
    DensityProfile p;
    p.point = make_vec({0, 0});
    double r = 1.0;
    for (const auto& [lo, hi] : ratios) {
        DensitySample s;
        s.radius = r;
        s.ratio = Interval(lo, hi);
        p.samples.push_back(s);
        r /= 2;
    }
    return p;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("half-plane quadrature")
{
    const auto lower = sets::make_half_space(make_vec({0, 1}), 0.0);
    const auto a = density::area_enclosure(lower, make_vec({0, 0}), 1.0, 10);
    CHECK(a.area.contains(std::numbers::pi / 2));
    CHECK(a.area.width() < 0.02);
    for (int depth = 1; depth <= 10; ++depth) {
        const auto p = density::density_profile(lower, make_vec({0, 0}), {1.0}, depth);
        CHECK(p.samples[0].ratio.contains(0.5));
        CHECK(p.samples[0].ratio.lo >= 0.0);
        CHECK(p.samples[0].ratio.hi <= 1.0);
    }
}

TEST_CASE("containing disk")
{
    const auto big = sets::make_disk(make_vec({0, 0}), 2.0);
    const auto a = density::area_enclosure(big, make_vec({0, 0}), 1.0, 8);
    CHECK(a.area.contains(std::numbers::pi));
    const auto p = density::density_profile(big, make_vec({0, 0}), {1.0, 0.5}, 8);
    CHECK(p.samples[0].ratio.lo == 0.0);
    CHECK(p.samples[0].ratio.hi < 0.02);
    CHECK(density::classify_lebesgue_of_complement(p) == LebesgueClass::not_lebesgue_likely);
}

TEST_CASE("disk areas enclose the exact lens area")
{
    gen::Source g(51);
    for (int k = 0; k < 30; ++k) {
        const Vec c = g.point(Box(make_vec({-1, -1}), make_vec({1, 1})));
        const double s = g.uniform(0.1, 1.2);
        const Vec x = g.point(Box(make_vec({-0.5, -0.5}), make_vec({0.5, 0.5})));
        const double r = g.uniform(0.1, 1.0);
        const auto disk = sets::make_disk(c, s);
        const double exact = lens_area(r, s, (x - c).norm());
        Interval prev(-1e300, 1e300);
        for (int depth = 3; depth <= 9; depth += 2) {
            const auto a = density::area_enclosure(disk, x, r, depth);
            CHECK(a.area.contains(exact));
            CHECK(a.area.within(prev));
            prev = a.area;
        }
    }
}

TEST_CASE("ex-plane witness point")
{
    const auto s = sets::example_plane_set(16);
    const double r = std::ldexp(1.0, -10);
    const auto a = density::area_enclosure(s, make_vec({2.0 / 3.0, 0}), r, 12);
    CHECK(a.area.hi <= 0.01 * std::numbers::pi * r * r);
    const auto p = density::density_profile(s, make_vec({2.0 / 3.0, 0}), {std::ldexp(1.0, -8), std::ldexp(1.0, -9), r}, 12);
    CHECK(p.samples.back().ratio.lo >= 0.99);
    CHECK(density::classify_lebesgue_of_complement(p) == LebesgueClass::lebesgue_likely);
}

TEST_CASE("translation equivariance on dyadic shifts")
{
    gen::Source g(52);
    for (int k = 0; k < 10; ++k) {
        const Vec w = make_vec({static_cast<double>(g.integer(-64, 64)) / 16, static_cast<double>(g.integer(-64, 64)) / 16});
        const Box b(make_vec({0, 0}), make_vec({0.75, 0.5}));
        const auto s0 = sets::make_box(b);
        const auto s1 = sets::make_box(Box(b.lo + w, b.hi + w));
        const Vec x = make_vec({0.75, 0.25});
        const auto p0 = density::density_profile(s0, x, {0.5, 0.25, 0.125}, 7);
        const auto p1 = density::density_profile(s1, x + w, {0.5, 0.25, 0.125}, 7);
        for (std::size_t i = 0; i < p0.samples.size(); ++i) {
            CHECK(p0.samples[i].ratio.lo == p1.samples[i].ratio.lo);
            CHECK(p0.samples[i].ratio.hi == p1.samples[i].ratio.hi);
        }
    }
}

TEST_CASE("profile validation and export")
{
    const auto s = sets::make_disk(make_vec({0, 0}), 1.0);
    CHECK_THROWS_AS(density::density_profile(s, make_vec({0, 0}), {0.5, 0.5}, 4), std::invalid_argument);
    CHECK_THROWS_AS(density::density_profile(s, make_vec({0, 0}), {0.25, 0.5}, 4), std::invalid_argument);
    CHECK_THROWS_AS(density::density_profile(s, make_vec({0, 0}), {-1.0}, 4), std::invalid_argument);
    const auto p = density::density_profile(s, make_vec({1, 0}), {0.5, 0.25}, 6);
    const auto j = density::profile_to_json(p);
    REQUIRE(j.size() == 2);
    CHECK(j[0].size() == 3);
    CHECK(j[0][0].get<double>() == 0.5);
    CHECK(density::profile_svg(p, "disk").find("<svg") == 0);
}

TEST_CASE("classifier thresholds")
{
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.49, 0.51}, {0.49, 0.51}})) ==
          LebesgueClass::not_lebesgue_likely);
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.0, 0.01}})) == LebesgueClass::not_lebesgue_likely);
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.97, 0.99}, {0.98, 1.0}, {0.99, 1.0}})) ==
          LebesgueClass::lebesgue_likely);
    // certified decrease in the tail
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.999, 1.0}, {0.975, 0.98}})) ==
          LebesgueClass::inconclusive);
    // between the bands
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.94, 0.96}})) == LebesgueClass::inconclusive);
    // upper bound below theta - eta
    CHECK(density::classify_lebesgue_of_complement(synthetic({{0.5, 0.92}})) == LebesgueClass::not_lebesgue_likely);
    CHECK(density::to_string(LebesgueClass::lebesgue_likely) == "LEBESGUE_LIKELY");
}

TEST_CASE("invariance under flow maps")
{
    const std::vector<double> radii = {0.125, 0.0625, 0.03125};
    const auto half = sets::make_half_space(make_vec({0, 1}), 0.0);
    const auto r1 = density::lipeomorphism_invariance_check(half, VectorField::rotation(1), 1.0,
                                                            {make_vec({0, 0})}, radii, 8);
    CHECK(r1.points[0].before == LebesgueClass::not_lebesgue_likely);
    CHECK(r1.points[0].after == LebesgueClass::not_lebesgue_likely);

    const auto square = sets::make_box(Box(make_vec({0, 0}), make_vec({1, 1})));
    const auto r2 = density::lipeomorphism_invariance_check(
        square, VectorField::linear(funnel::Mat::Identity(2, 2)), 0.5, {make_vec({0, 0}), make_vec({1, 1})}, radii, 8);
    for (const auto& p : r2.points) {
        CHECK(p.before == LebesgueClass::not_lebesgue_likely);
        CHECK(p.after == LebesgueClass::not_lebesgue_likely);
    }
    CHECK(r2.points[1].image.isApprox(make_vec({std::exp(0.5), std::exp(0.5)})));

    const auto r3 = density::lipeomorphism_invariance_check(
        sets::example_plane_set(16), VectorField::constant(make_vec({0, 1})), 0.3, {make_vec({2.0 / 3.0, 0})},
        {std::ldexp(1.0, -8), std::ldexp(1.0, -9), std::ldexp(1.0, -10)}, 12);
    CHECK(r3.points[0].before == LebesgueClass::lebesgue_likely);
    CHECK(r3.points[0].after == LebesgueClass::lebesgue_likely);
    CHECK(r3.flips == 0);
}

TEST_CASE("ball volumes")
{
    CHECK(density::ball_volume(2, 1.0).contains(std::numbers::pi));
    CHECK(density::ball_volume(1, 0.5).contains(1.0));
    CHECK(density::ball_volume(3, 2.0).contains(4.0 / 3.0 * std::numbers::pi * 8));
}

}  // TEST_SUITE
