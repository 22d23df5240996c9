#include "funnel/density/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "funnel/parallel.hpp"

namespace funnel::density {

namespace {

enum class NodeFate : std::uint8_t { drop, inside, split, gap };

struct Node {
    std::array<std::uint32_t, kMaxDim> idx{};
};

}  // namespace

Interval ball_volume(int dim, double r)
{
    Interval v = unit_ball_volume(dim);
    const Interval rr = Interval::point(r);
    for (int k = 0; k < dim; ++k) {
        v = v * rr;
    }
    return v;
}

AreaEnclosure area_enclosure(const sets::SetDescription& set, const Vec& x, double r, int max_depth)
{
    const int n = set.dim();
    if (x.size() != n) {
        throw std::invalid_argument("point dimension does not match the set");
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument("ball radius must be positive");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("quadrature depth must be at least 1");
    }
    if (n * max_depth > 52 || max_depth > 31) {
        throw std::invalid_argument("quadrature depth too large for exact bookkeeping");
    }

    const double inner = r * (1.0 - 1e-12);
    const double outer = r * (1.0 + 1e-12);
    // Counts per depth; a node at depth d is 2^{-n d} of the root box.
    std::vector<std::uint64_t> inside_count(static_cast<std::size_t>(max_depth) + 1, 0);
    std::vector<std::uint64_t> gap_count(static_cast<std::size_t>(max_depth) + 1, 0);
    std::size_t visited = 0;

    std::vector<Node> level{Node{}};
    for (int depth = 0; depth <= max_depth && !level.empty(); ++depth) {
        const double side = 2.0 * r / std::ldexp(1.0, depth);
        const double half_diag = 0.5 * side * std::sqrt(static_cast<double>(n)) * (1.0 + 1e-12);
        std::vector<NodeFate> fate(level.size());
        parallel_for(level.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const Node& node = level[i];
                double near2 = 0.0;
                double far2 = 0.0;
                Vec center(n);
                for (int k = 0; k < n; ++k) {
                    const double lo = -r + static_cast<double>(node.idx[static_cast<std::size_t>(k)]) * side;
                    const double hi = lo + side;
                    far2 += std::max(lo * lo, hi * hi);
                    if (lo > 0.0) {
                        near2 += lo * lo;
                    } else if (hi < 0.0) {
                        near2 += hi * hi;
                    }
                    center[k] = x[k] + 0.5 * (lo + hi);
                }
                if (std::sqrt(near2) >= outer) {
                    fate[i] = NodeFate::drop;
                    continue;
                }
                const bool in_ball = std::sqrt(far2) <= inner;
                const auto m = set.membership(center);
                const bool certified = m.status != sets::Status::unknown && m.margin > half_diag;
                if (certified && m.status == sets::Status::out) {
                    fate[i] = NodeFate::drop;
                } else if (certified && in_ball) {
                    fate[i] = NodeFate::inside;
                } else {
                    fate[i] = depth == max_depth ? NodeFate::gap : NodeFate::split;
                }
            }
        });

        std::vector<Node> next;
        const auto d = static_cast<std::size_t>(depth);
        for (std::size_t i = 0; i < level.size(); ++i) {
            switch (fate[i]) {
            case NodeFate::drop:
                break;
            case NodeFate::inside:
                ++inside_count[d];
                break;
            case NodeFate::gap:
                ++gap_count[d];
                break;
            case NodeFate::split:
                for (std::uint32_t code = 0; code < (1U << n); ++code) {
                    Node child;
                    for (int k = 0; k < n; ++k) {
                        const auto ku = static_cast<std::size_t>(k);
                        child.idx[ku] = 2 * level[i].idx[ku] + ((code >> k) & 1U);
                    }
                    next.push_back(child);
                }
                break;
            }
        }
        visited += level.size();
        level = std::move(next);
    }

    // Sum in units of the deepest cell: exact in 64-bit integers.
    std::uint64_t inside_units = 0;
    std::uint64_t gap_units = 0;
    for (int depth = 0; depth <= max_depth; ++depth) {
        const auto shift = static_cast<unsigned>(n * (max_depth - depth));
        inside_units += inside_count[static_cast<std::size_t>(depth)] << shift;
        gap_units += gap_count[static_cast<std::size_t>(depth)] << shift;
    }
    const int total_bits = n * max_depth;
    AreaEnclosure out;
    out.inside_fraction = std::ldexp(static_cast<double>(inside_units), -total_bits);
    out.gap_fraction = std::ldexp(static_cast<double>(gap_units), -total_bits);
    out.nodes = visited;
    out.max_depth = max_depth;

    Interval root = Interval::point(1.0);
    for (int k = 0; k < n; ++k) {
        root = root * Interval::point(2.0 * r);
    }
    const Interval lower = root * Interval::point(out.inside_fraction);
    const Interval upper = root * Interval::point(out.inside_fraction + out.gap_fraction);
    out.area = {std::fmax(0.0, lower.lo), upper.hi};
    return out;
}

}  // namespace funnel::density
