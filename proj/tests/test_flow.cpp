#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "funnel/flow/flow_checks.hpp"
#include "funnel/flow/flow_map.hpp"
#include "funnel/flow/vector_field.hpp"
#include "support/generators.hpp"

using funnel::Box;
using funnel::make_vec;
using funnel::Mat;
using funnel::Vec;
using funnel::flow::VectorField;
namespace flow = funnel::flow;

namespace {

Mat mat2(double a, double b, double c, double d)
{
    Mat m(2, 2);
    m << a, b, c, d;
    return m;
}

// e^{tA} x by a long Taylor series with scaling and squaring, independent of
// the library's matrix exponential.
Vec taylor_exp_apply(const Mat& a, double t, const Vec& x)
{
    int squarings = 0;
    double scale = t;
    while (std::abs(scale) * a.cwiseAbs().maxCoeff() > 0.125) {
        scale /= 2.0;
        ++squarings;
    }
    const Mat m = scale * a;
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * m / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum * x;
}

Vec rotate(const Vec& x, double angle)
{
    return make_vec({std::cos(angle) * x[0] - std::sin(angle) * x[1], std::sin(angle) * x[0] + std::cos(angle) * x[1]});
}

// Radial flow through its scalar ODE r' = g(r) r, by fine fixed-step RK4.
double radial_radius(double r0, double t)
{
    const int steps = 20000;
    const double h = t / steps;
    auto f = [](double r) { return flow::radial_profile(r) * r; };
    double r = r0;
    for (int k = 0; k < steps; ++k) {
        const double k1 = f(r);
        const double k2 = f(r + 0.5 * h * k1);
        const double k3 = f(r + 0.5 * h * k2);
        const double k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("field evaluation")
{
    CHECK(VectorField::constant(make_vec({0, 1})).eval(make_vec({5, -3})) == make_vec({0, 1}));
    CHECK(VectorField::linear(Mat::Identity(2, 2)).eval(make_vec({2, 3})) == make_vec({2, 3}));
    CHECK(VectorField::rotation(1).eval(make_vec({1, 0})).isApprox(make_vec({0, 1})));
    const auto radial = VectorField::radial();
    CHECK(radial.eval(make_vec({0.25, 0})).isApprox(make_vec({0.25, 0})));
    CHECK(radial.eval(make_vec({2, 0})).norm() == 0.0);
    CHECK_THROWS((void)VectorField::radial(2, false).eval(make_vec({2, 0})));
}

TEST_CASE("radial profile shape")
{
    CHECK(flow::radial_profile(0.0) == 1.0);
    CHECK(flow::radial_profile(0.5) == 1.0);
    CHECK(flow::radial_profile(1.0) == doctest::Approx(0.0));
    double prev = 1.0;
    for (int k = 0; k <= 1000; ++k) {
        const double r = k / 1000.0;
        const double g = flow::radial_profile(r);
        CHECK(g <= prev + 1e-15);
        CHECK(std::abs(flow::radial_profile_derivative(r)) <= flow::kRadialProfileSlopeSup);
        prev = g;
    }
}

TEST_CASE("flow map examples")
{
    CHECK(flow::flow_map(VectorField::constant(make_vec({0, 1})), make_vec({0, 0}), 1.0) == make_vec({0, 1}));
    Mat one(1, 1);
    one << 1.0;
    CHECK(flow::flow_map(VectorField::linear(one), make_vec({1}), 1.0)[0] == doctest::Approx(std::numbers::e).epsilon(1e-12));
    const Vec q = flow::flow_map(VectorField::rotation(1), make_vec({1, 0}), std::numbers::pi / 2);
    CHECK((q - make_vec({0, 1})).norm() < 1e-10);
}

TEST_CASE("adaptive integrator against closed-form oracles")
{
    gen::Source g(31);
    const std::vector<Mat> mats = {mat2(-0.5, 1, -1, -0.5), mat2(1, 0, 0, 1), mat2(0.3, -2, 0.7, -0.1),
                                   mat2(0, 1, 0, 0)};
    flow::IntegratorOptions opts;
    for (const auto& a : mats) {
        const auto field = VectorField::linear(a);
        for (int k = 0; k < 20; ++k) {
            const Vec x = g.point(Box(make_vec({-1, -1}), make_vec({1, 1})));
            const double t = g.uniform(-1, 1);
            const Vec oracle = taylor_exp_apply(a, t, x);
            CHECK((flow::integrate_adaptive(field, x, t, opts) - oracle).norm() <= 1e-8);
            CHECK((flow::FlowMap(field, t)(x) - oracle).norm() <= 1e-12);
            CHECK((field.affine_flow(t)->apply(x) - oracle).norm() <= 1e-12);
        }
    }
    const auto rot = VectorField::rotation(1.5);
    for (int k = 0; k < 20; ++k) {
        const Vec x = g.point(Box(make_vec({-1, -1}), make_vec({1, 1})));
        const double t = g.uniform(0, 1);
        CHECK((flow::integrate_adaptive(rot, x, t, opts) - rotate(x, 1.5 * t)).norm() <= 1e-8);
    }
    const Vec c = make_vec({1, -0.5});
    const Vec x = make_vec({0.25, 0.75});
    CHECK((flow::integrate_adaptive(VectorField::constant(c), x, 0.7, opts) - (x + 0.7 * c)).norm() <= 1e-12);
}

TEST_CASE("radial flow follows its scalar ODE and stays in the unit disk")
{
    gen::Source g(32);
    const auto field = VectorField::radial();
    for (int k = 0; k < 20; ++k) {
        const Vec x = g.in_disk(make_vec({0, 0}), 0.95);
        const double t = g.uniform(0, 2);
        const Vec y = flow::flow_map(field, x, t);
        CHECK(y.norm() == doctest::Approx(radial_radius(x.norm(), t)).epsilon(1e-8));
        CHECK(y.norm() < 1.0);
        // direction is preserved
        CHECK(std::abs(x[0] * y[1] - x[1] * y[0]) <= 1e-9 * y.norm());
    }
    CHECK(flow::flow_map(field, make_vec({1.5, 0}), 1.0) == make_vec({1.5, 0}));
}

TEST_CASE("group property of the flow")
{
    gen::Source g(33);
    const auto fields = {VectorField::radial(), VectorField::rotation(-0.8),
                         VectorField::shifted(VectorField::linear(mat2(0.2, 1, -1, 0.1)), make_vec({0.5, 0}))};
    for (const auto& field : fields) {
        for (int k = 0; k < 10; ++k) {
            const Vec x = g.in_disk(make_vec({0, 0}), 0.9);
            const double s = g.uniform(-0.5, 0.5);
            const double t = g.uniform(-0.5, 0.5);
            const Vec a = flow::flow_map(field, flow::flow_map(field, x, s), t);
            CHECK((a - flow::flow_map(field, x, s + t)).norm() <= 1e-8);
        }
    }
}

TEST_CASE("trajectories")
{
    const auto tr = flow::trajectory(VectorField::constant(make_vec({0, 1})), make_vec({0, 0}), 1.0, 0.25);
    REQUIRE(tr.points.size() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK((tr.points[j] - make_vec({0, 0.25 * static_cast<double>(j)})).norm() < 1e-15);
    }
    CHECK(tr.excursion <= 0.25 + 1e-15);

    const double two_pi = 2 * std::numbers::pi;
    const auto loop = flow::trajectory(VectorField::rotation(1), make_vec({1, 0}), two_pi, two_pi / 1024);
    CHECK((loop.points.back() - make_vec({1, 0})).norm() < 1e-9);
    CHECK(loop.times.back() == doctest::Approx(two_pi));

    const auto still = flow::trajectory(VectorField::linear(Mat::Zero(2, 2)), make_vec({0.3, 0.4}), 1.0, 0.1);
    for (const auto& p : still.points) {
        CHECK(p == make_vec({0.3, 0.4}));
    }
    CHECK(still.excursion == 0.0);
    CHECK_THROWS_AS(flow::trajectory(VectorField::rotation(1), make_vec({1, 0}), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("excursion bound covers sampled trajectories")
{
    gen::Source g(34);
    const auto field = VectorField::linear(mat2(0.4, -1, 1.2, 0.1));
    for (int k = 0; k < 30; ++k) {
        const Vec x = g.point(Box(make_vec({-1, -1}), make_vec({1, 1})));
        const double t = g.uniform(0.01, 1);
        const double bound = flow::excursion_bound(field.eval(x).norm(), field.lipschitz(), t);
        for (int s = 1; s <= 20; ++s) {
            const Vec y = flow::flow_map(field, x, t * s / 20.0);
            CHECK((y - x).norm() <= bound + 1e-12);
        }
    }
}

TEST_CASE("gronwall ratios")
{
    gen::Source g(35);
    std::vector<flow::PointPair> pairs;
    for (int k = 0; k < 200; ++k) {
        pairs.push_back({g.point(Box(make_vec({-1, -1}), make_vec({1, 1}))),
                         g.point(Box(make_vec({-1, -1}), make_vec({1, 1})))});
    }
    CHECK(flow::gronwall_check(VectorField::constant(make_vec({1, 2})), pairs, 0.7) == doctest::Approx(1.0));
    CHECK(flow::gronwall_bound(VectorField::constant(make_vec({1, 2})), 0.7) == 1.0);
    CHECK(flow::gronwall_check(VectorField::rotation(1), pairs, 1.0) == doctest::Approx(1.0));
    CHECK(flow::gronwall_bound(VectorField::rotation(1), 1.0) == doctest::Approx(std::numbers::e));
    const auto id = VectorField::linear(Mat::Identity(2, 2));
    CHECK(flow::gronwall_check(id, pairs, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-9));
    CHECK(flow::gronwall_check(id, pairs, 1.0) <= flow::gronwall_bound(id, 1.0) * (1 + 1e-9));
    const std::vector<flow::PointPair> same = {{make_vec({0, 0}), make_vec({0, 0})}};
    CHECK_THROWS(flow::gronwall_check(id, same, 1.0));
}

TEST_CASE("inverse consistency")
{
    const double tol = flow::kDefaultFlowTol;
    CHECK(flow::inverse_consistency(VectorField::constant(make_vec({3, 1})), make_vec({0.1, 0.2}), 1.0) <= 1e-15);
    CHECK(flow::inverse_consistency(VectorField::rotation(1), make_vec({1, 0}), 0.7) <= 2 * tol);
    CHECK(flow::inverse_consistency(VectorField::linear(Mat::Identity(2, 2)), make_vec({1, 1}), 1.0) <=
          (1 + std::numbers::e) * tol);
    gen::Source g(36);
    for (int k = 0; k < 30; ++k) {
        const Vec x = g.in_disk(make_vec({0, 0}), 1.0);
        CHECK(flow::inverse_consistency(VectorField::radial(), x, g.uniform(-1, 1)) <= 2 * tol);
    }
}

TEST_CASE("growth rates and sup bounds")
{
    const auto a = VectorField::linear(mat2(1, 2, 0, -3));
    const Box box(make_vec({-1, -1}), make_vec({1, 1}));
    gen::Source g(37);
    for (int k = 0; k < 200; ++k) {
        CHECK(a.eval(g.point(box)).norm() <= a.sup_bound(box));
    }
    CHECK(a.growth_rate(flow::TimeDirection::forward) <= a.lipschitz());
    CHECK(a.growth_rate(flow::TimeDirection::backward) <= a.lipschitz());
    CHECK(VectorField::rotation(2).growth_rate(flow::TimeDirection::forward) == doctest::Approx(0.0));
    CHECK(VectorField::scaled(VectorField::rotation(2), 0.5).lipschitz() == doctest::Approx(1.0));
}

}  // TEST_SUITE
