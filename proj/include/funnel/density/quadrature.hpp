#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "funnel/geometry.hpp"
#include "funnel/interval.hpp"
#include "funnel/sets/set_description.hpp"

namespace funnel::density {

/// Two-sided bound on ℒⁿ(B(x, r) ∩ S) from a 2ⁿ-tree over [x - r, x + r]ⁿ.
struct AreaEnclosure {
    Interval area;
    /// Certified-inside volume and unresolved (gap) volume, as fractions of
    /// the root box; both are exact dyadic numbers.
    double inside_fraction = 0.0;
    double gap_fraction = 0.0;
    std::size_t nodes = 0;
    int max_depth = 0;
};

/// Nodes entirely inside the ball and certified IN count fully; nodes
/// certified OUT or entirely outside the ball count nothing; the rest split
/// until max_depth and then count toward the gap only.
/// Throws std::invalid_argument for r <= 0, max_depth < 1 or a depth that
/// would overflow exact dyadic bookkeeping (n · max_depth > 52).
AreaEnclosure area_enclosure(const sets::SetDescription& set, const Vec& x, double r, int max_depth);

/// ℒⁿ(B(x, r)) as an interval.
Interval ball_volume(int dim, double r);

}  // namespace funnel::density
