#include "funnel/flow/flow_checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace funnel::flow {

Trajectory trajectory(const VectorField& field, const Vec& x0, double t, double step, double tol)
{
    if (!(step > 0.0)) {
        throw std::invalid_argument("trajectory step must be positive");
    }
    IntegratorOptions opts;
    opts.tol = tol;
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const double span = std::abs(t);
    const FlowMap full_step(field, sign * step, opts);
    const double lip = field.lipschitz();

    Trajectory tr;
    tr.times.push_back(0.0);
    tr.points.push_back(x0);
    double tau = 0.0;
    Vec x = x0;
    while (tau < span) {
        const double remaining = span - tau;
        const bool partial = remaining < step * (1.0 + 1e-12);
        const double h = partial ? remaining : step;
        const double speed = field.eval(x).norm();
        tr.excursion = std::max(tr.excursion, excursion_bound(speed, lip, h));
        x = partial ? FlowMap(field, sign * h, opts)(x) : full_step(x);
        tau = partial ? span : tau + step;
        tr.times.push_back(sign * tau);
        tr.points.push_back(x);
    }
    return tr;
}

double gronwall_bound(const VectorField& field, double t) { return std::exp(field.lipschitz() * std::abs(t)); }

double gronwall_check(const VectorField& field, std::span<const PointPair> pairs, double t, double tol)
{
    if (pairs.empty()) {
        throw std::invalid_argument("gronwall_check needs at least one pair");
    }
    IntegratorOptions opts;
    opts.tol = tol;
    const FlowMap phi(field, t, opts);
    double worst = 0.0;
    for (const auto& p : pairs) {
        const double d = (p.x - p.y).norm();
        if (!(d > 0.0)) {
            throw std::invalid_argument("gronwall_check given a coincident pair");
        }
        worst = std::max(worst, (phi(p.x) - phi(p.y)).norm() / d);
    }
    return worst;
}

double inverse_consistency(const VectorField& field, const Vec& x0, double t, double tol)
{
    IntegratorOptions opts;
    opts.tol = tol;
    const Vec there = FlowMap(field, t, opts)(x0);
    return (FlowMap(field, -t, opts)(there) - x0).norm();
}

}  // namespace funnel::flow
