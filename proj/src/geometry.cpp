#include "funnel/geometry.hpp"
#include "funnel/interval.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace funnel {

Vec make_vec(std::initializer_list<double> values)
{
    if (values.size() == 0 || values.size() > static_cast<std::size_t>(kMaxDim)) {
        throw std::invalid_argument("vector dimension must be in [1, 4]");
    }
    Vec v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v[i++] = x;
    }
    return v;
}

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw std::invalid_argument("box corners must share a positive dimension");
    }
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        if (!(lo[k] <= hi[k])) {
            throw std::invalid_argument("box needs lo <= hi on every axis");
        }
    }
}

double Box::volume() const
{
    double v = 1.0;
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        v *= hi[k] - lo[k];
    }
    return v;
}

bool Box::contains(const Vec& x) const
{
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        if (x[k] < lo[k] || x[k] > hi[k]) {
            return false;
        }
    }
    return true;
}

double Box::distance_outside(const Vec& x) const
{
    double s = 0.0;
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        double d = 0.0;
        if (x[k] < lo[k]) {
            d = lo[k] - x[k];
        } else if (x[k] > hi[k]) {
            d = x[k] - hi[k];
        }
        s += d * d;
    }
    return std::sqrt(s);
}

double Box::depth_inside(const Vec& x) const
{
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
    }
    return std::max(d, 0.0);
}

double Box::max_norm() const
{
    double s = 0.0;
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        const double m = std::max(std::abs(lo[k]), std::abs(hi[k]));
        s += m * m;
    }
    return std::sqrt(s);
}

Interval unit_ball_volume(int dim)
{
    const Interval pi = pi_interval();
    switch (dim) {
    case 1:
        return Interval::point(2.0);
    case 2:
        return pi;
    case 3:
        return Interval::point(4.0) * pi / Interval::point(3.0);
    case 4:
        return pi * pi / Interval::point(2.0);
    default:
        throw std::invalid_argument("unit ball volume needs dimension in [1, 4]");
    }
}

}  // namespace funnel
