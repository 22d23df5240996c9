#include "funnel/exact/interval_union.hpp"

#include <algorithm>
#include <stdexcept>

namespace funnel::exact {

OpenInterval::OpenInterval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (!(lo < hi)) {
        throw std::invalid_argument("open interval needs lo < hi, got (" + lo.str() + ", " + hi.str() + ")");
    }
}

MeasureEnclosure::MeasureEnclosure(Rational lower_, Rational upper_)
    : lower(std::move(lower_)), upper(std::move(upper_))
{
    if (upper < lower) {
        throw std::invalid_argument("measure enclosure with lower > upper");
    }
}

IntervalUnion& IntervalUnion::insert(const OpenInterval& iv)
{
    // First interval whose right end lies strictly beyond iv.lo: everything
    // before it ends at or left of iv.lo and cannot overlap.
    auto first = std::partition_point(intervals_.begin(), intervals_.end(),
                                      [&](const OpenInterval& e) { return e.hi <= iv.lo; });
    auto last = first;
    Rational lo = iv.lo;
    Rational hi = iv.hi;
    while (last != intervals_.end() && last->lo < iv.hi) {
        lo = min(lo, last->lo);
        hi = max(hi, last->hi);
        ++last;
    }
    first = intervals_.erase(first, last);
    intervals_.insert(first, OpenInterval(std::move(lo), std::move(hi)));
    return *this;
}

Rational IntervalUnion::measure() const
{
    Rational total;
    for (const auto& iv : intervals_) {
        total += iv.length();
    }
    return total;
}

bool IntervalUnion::contains(const Rational& x) const
{
    return std::any_of(intervals_.begin(), intervals_.end(), [&](const OpenInterval& iv) { return iv.contains(x); });
}

IntervalUnion IntervalUnion::clipped(const Rational& a, const Rational& b) const
{
    IntervalUnion out;
    for (const auto& iv : intervals_) {
        Rational lo = max(iv.lo, a);
        Rational hi = min(iv.hi, b);
        if (lo < hi) {
            out.intervals_.emplace_back(std::move(lo), std::move(hi));
        }
    }
    return out;
}

IntervalUnion union_insert(IntervalUnion u, const OpenInterval& iv)
{
    u.insert(iv);
    return u;
}

std::vector<ClosedInterval> complement_within(const IntervalUnion& u, const Rational& a, const Rational& b)
{
    if (b < a) {
        throw std::invalid_argument("complement_within needs a <= b");
    }
    std::vector<ClosedInterval> out;
    Rational cursor = a;
    for (const auto& iv : u.intervals()) {
        if (iv.hi < a) {
            continue;
        }
        if (b < iv.lo) {
            break;
        }
        // The cursor is never covered by U, so [cursor, iv.lo] is a gap
        // whenever iv starts at or after it.
        if (cursor <= iv.lo) {
            out.push_back({cursor, iv.lo});
        }
        if (cursor < iv.hi) {
            cursor = iv.hi;
        }
        if (b < cursor) {
            return out;
        }
    }
    if (cursor <= b) {
        out.push_back({cursor, b});
    }
    return out;
}

Rational total_length(std::span<const ClosedInterval> pieces)
{
    Rational total;
    for (const auto& p : pieces) {
        total += p.length();
    }
    return total;
}

}  // namespace funnel::exact
