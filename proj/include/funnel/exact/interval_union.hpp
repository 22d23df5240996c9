#pragma once

#include <span>
#include <vector>

#include "funnel/exact/rational.hpp"

namespace funnel::exact {

/// Open interval (lo, hi) with lo < hi.
struct OpenInterval {
    Rational lo;
    Rational hi;

    OpenInterval(Rational lo_, Rational hi_);
    [[nodiscard]] Rational length() const { return hi - lo; }
    [[nodiscard]] bool contains(const Rational& x) const { return lo < x && x < hi; }
    friend bool operator==(const OpenInterval&, const OpenInterval&) = default;
};

/// Closed interval [lo, hi] with lo <= hi; lo == hi is a single point.
struct ClosedInterval {
    Rational lo;
    Rational hi;

    [[nodiscard]] bool degenerate() const { return lo == hi; }
    [[nodiscard]] Rational length() const { return hi - lo; }
    friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

/// Certified enclosure lower <= value <= upper of a measure.
struct MeasureEnclosure {
    Rational lower;
    Rational upper;

    MeasureEnclosure(Rational lower_, Rational upper_);
    [[nodiscard]] Rational width() const { return upper - lower; }
    [[nodiscard]] bool contains(const Rational& x) const { return lower <= x && x <= upper; }
    /// True when this enclosure is nested inside `outer`.
    [[nodiscard]] bool within(const MeasureEnclosure& outer) const
    {
        return outer.lower <= lower && upper <= outer.upper;
    }
};

/// Finite union of open intervals, kept sorted and pairwise disjoint.
///
/// Two intervals that merely share an endpoint stay separate: the shared
/// point belongs to neither.
class IntervalUnion {
public:
    IntervalUnion() = default;

    /// Adds `iv`, merging every interval it genuinely overlaps.
    IntervalUnion& insert(const OpenInterval& iv);

    [[nodiscard]] std::span<const OpenInterval> intervals() const noexcept { return intervals_; }
    [[nodiscard]] std::size_t size() const noexcept { return intervals_.size(); }
    [[nodiscard]] bool empty() const noexcept { return intervals_.empty(); }

    /// Exact sum of interval lengths.
    [[nodiscard]] Rational measure() const;
    [[nodiscard]] bool contains(const Rational& x) const;

    /// Intersection with the interval [a, b] (same measure as with (a, b)).
    [[nodiscard]] IntervalUnion clipped(const Rational& a, const Rational& b) const;

private:
    std::vector<OpenInterval> intervals_;
};

/// Pure form of IntervalUnion::insert.
[[nodiscard]] IntervalUnion union_insert(IntervalUnion u, const OpenInterval& iv);

/// Maximal closed intervals of [a, b] \ U, in increasing order. Degenerate
/// single-point pieces are kept; their measure is zero.
[[nodiscard]] std::vector<ClosedInterval> complement_within(const IntervalUnion& u, const Rational& a,
                                                            const Rational& b);

[[nodiscard]] Rational total_length(std::span<const ClosedInterval> pieces);

}  // namespace funnel::exact
