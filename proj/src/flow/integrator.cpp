#include "funnel/flow/flow_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace funnel::flow {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Vec integrate_adaptive(const VectorField& field, const Vec& x0, double t, const IntegratorOptions& opts,
                       IntegrationStats* stats)
{
    if (!(opts.tol > 0.0)) {
        throw std::invalid_argument("integrator tolerance must be positive");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("integration time must be finite");
    }
    IntegrationStats local;
    IntegrationStats& st = stats ? *stats : local;
    st = {};
    Vec y = x0;
    if (t == 0.0) {
        return y;
    }

    const double sign = t > 0.0 ? 1.0 : -1.0;
    const double span = std::abs(t);
    // Local tolerance tighter than the global target; errors accumulate over
    // roughly span / h steps and are amplified by the flow.
    const double growth = std::exp(std::min(field.lipschitz() * span, 20.0));
    const double local_tol = std::max(opts.tol * 0.05 / (std::max(1.0, span) * growth), 1e-14);
    auto f = [&](const Vec& x) { return Vec(sign * field.eval(x)); };
    auto err_norm = [&](const Vec& err, const Vec& a, const Vec& b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            const double sc = local_tol + local_tol * std::max(std::abs(a[i]), std::abs(b[i]));
            s += (err[i] / sc) * (err[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(err.size()));
    };

    Vec k1 = f(y);
    double h = 0.0;
    {
        const double d0 = y.norm();
        const double d1 = k1.norm();
        h = (d1 > 1e-12 && d0 > 1e-12) ? 0.01 * d0 / d1 : 1e-3;
        h = std::min({h, span, 0.1});
    }
    const double h_floor = opts.min_step * std::max(1.0, span);
    double s = 0.0;
    double err_prev = 1e-4;

    while (s < span) {
        if (st.accepted + st.rejected >= opts.max_steps) {
            throw IntegrationError("integrator exceeded the step budget");
        }
        bool last = false;
        if (s + h >= span) {
            h = span - s;
            last = true;
        }
        const Vec k2 = f(y + h * (a21 * k1));
        const Vec k3 = f(y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = f(y_new);
        const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = std::max(err_norm(err, y, y_new), 1e-10);

        if (en <= 1.0) {
            s = last ? span : s + h;
            y = y_new;
            k1 = k7;
            ++st.accepted;
            st.last_step = h;
            const double fac = 0.9 * std::pow(en, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 10.0);
            err_prev = en;
        } else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (s < span && h < h_floor) {
            std::ostringstream os;
            os << "step size underflow: h=" << h << " at time " << sign * s << " of " << t << ", state ("
               << y.transpose() << ")";
            throw IntegrationError(os.str());
        }
    }
    return y;
}

Vec integrate_rk4(const VectorField& field, const Vec& x0, double t, std::size_t steps)
{
    if (steps == 0) {
        throw std::invalid_argument("rk4 needs at least one step");
    }
    const double h = t / static_cast<double>(steps);
    Vec y = x0;
    for (std::size_t i = 0; i < steps; ++i) {
        const Vec k1 = field.eval(y);
        const Vec k2 = field.eval(y + 0.5 * h * k1);
        const Vec k3 = field.eval(y + 0.5 * h * k2);
        const Vec k4 = field.eval(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

FlowMap::FlowMap(VectorField field, double t, IntegratorOptions opts)
    : field_(std::move(field)), t_(t), opts_(opts), affine_(field_.affine_flow(t))
{
    if (!(opts_.tol > 0.0)) {
        throw std::invalid_argument("flow tolerance must be positive");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("flow time must be finite");
    }
}

Vec FlowMap::operator()(const Vec& x) const
{
    if (affine_) {
        return affine_->apply(x);
    }
    return integrate_adaptive(field_, x, t_, opts_);
}

Vec flow_map(const VectorField& field, const Vec& x0, double t, double tol)
{
    IntegratorOptions opts;
    opts.tol = tol;
    return FlowMap(field, t, opts)(x0);
}

}  // namespace funnel::flow
