#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace funnel {

// Closed floating-point interval with outward rounding: every operation
// widens its result by one ulp on each side, so the exact real result of the
// same operation on any members is always enclosed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {}
    static constexpr Interval point(double x) { return {x, x}; }

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
    [[nodiscard]] bool within(const Interval& outer) const { return outer.lo <= lo && hi <= outer.hi; }

    static double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
    static double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

    friend Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
    friend Interval operator*(const Interval& a, const Interval& b)
    {
        const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
        double lo = p[0];
        double hi = p[0];
        for (double v : p) {
            lo = std::fmin(lo, v);
            hi = std::fmax(hi, v);
        }
        return {down(lo), up(hi)};
    }
    friend Interval operator/(const Interval& a, const Interval& b)
    {
        if (b.lo <= 0.0 && b.hi >= 0.0) {
            throw std::domain_error("interval division by an interval containing zero");
        }
        return a * Interval(down(1.0 / b.hi), up(1.0 / b.lo));
    }

    /// Intersection with [lo, hi] (used to clamp ratios into [0, 1]).
    [[nodiscard]] Interval clamped(double min_value, double max_value) const
    {
        return {std::fmax(lo, min_value), std::fmin(hi, max_value)};
    }
};

/// Interval certainly containing pi.
inline Interval pi_interval() { return {Interval::down(std::numbers::pi), Interval::up(std::numbers::pi)}; }

/// Volume of the Euclidean unit ball in dimension 1..4.
Interval unit_ball_volume(int dim);

}  // namespace funnel
