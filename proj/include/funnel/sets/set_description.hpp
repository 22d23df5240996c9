#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "funnel/exact/rational.hpp"
#include "funnel/geometry.hpp"

namespace funnel::sets {

enum class Status : std::uint8_t { in = 0, out = 1, unknown = 2 };

std::string to_string(Status s);

/// Tri-state verdict. IN with margin m: the ball B(x, m) lies in the set.
/// OUT with margin m: B(x, m) misses the set. UNKNOWN always has margin 0.
struct Membership {
    Status status = Status::unknown;
    double margin = 0.0;

    static Membership unknown() { return {}; }
};

enum class Topology { open, closed };

std::string to_string(Topology t);

/// Ball with exact center and radius.
struct Ball {
    std::vector<exact::Rational> center;
    exact::Rational radius;
};

/// Region certified to contain every ball of an infinite family beyond the
/// explicitly listed prefix. Bounds may be infinite.
struct TailHull {
    Box hull;
    exact::Rational radius_bound;
};

namespace detail {

class SetNode {
public:
    virtual ~SetNode() = default;
    [[nodiscard]] virtual Membership membership(const Vec& x) const = 0;
    [[nodiscard]] virtual int dim() const = 0;
    [[nodiscard]] virtual std::string describe() const = 0;
};

}  // namespace detail

/// Immutable, cheaply copyable description of a region of R^n.
///
/// Every verdict is sound for the full mathematical set, including sets given
/// by an explicit prefix plus a tail hull.
class SetDescription {
public:
    SetDescription(std::shared_ptr<const detail::SetNode> node, Topology topology);

    [[nodiscard]] Membership membership(const Vec& x) const { return node_->membership(x); }
    [[nodiscard]] int dim() const { return node_->dim(); }
    [[nodiscard]] Topology topology() const noexcept { return topology_; }
    [[nodiscard]] std::string describe() const;

private:
    std::shared_ptr<const detail::SetNode> node_;
    Topology topology_;
};

[[nodiscard]] SetDescription make_box(const Box& box, Topology topology = Topology::closed);

/// {x : normal · x < offset} (or <= when closed).
[[nodiscard]] SetDescription make_half_space(const Vec& normal, double offset, Topology topology = Topology::open);

[[nodiscard]] SetDescription make_disk(const Vec& center, double radius, Topology topology = Topology::open);

/// Union of explicit balls plus an optional tail hull; points in the hull but
/// outside every explicit ball are UNKNOWN.
[[nodiscard]] SetDescription make_ball_union(std::vector<Ball> balls, std::optional<TailHull> tail,
                                             Topology topology = Topology::open);

/// First n balls B((x_i, 0), r_i) of the dense dyadic family, with tail strip
/// [-r_{n+1}, 1 + r_{n+1}] x [-r_{n+1}, r_{n+1}].
[[nodiscard]] SetDescription example_plane_set(std::uint64_t n);

/// Same radii with centers (x_i, -i); the tail lies below y = -(n+1) + r_{n+1}.
[[nodiscard]] SetDescription example_unbounded_set(std::uint64_t n);

/// Balls of example_plane_set / example_unbounded_set, exposed for reports.
[[nodiscard]] std::vector<Ball> example_balls(std::uint64_t n, bool descending_rows);
[[nodiscard]] TailHull example_tail(std::uint64_t n, bool descending_rows);

enum class BooleanOp { set_union, set_intersection, set_complement };

/// Tri-state boolean combination; complement takes exactly one child.
/// Throws std::invalid_argument on an empty child list or mixed dimensions.
[[nodiscard]] SetDescription boolean_combination(BooleanOp op, std::vector<SetDescription> children);

[[nodiscard]] SetDescription set_union(std::vector<SetDescription> children);
[[nodiscard]] SetDescription set_intersection(std::vector<SetDescription> children);
[[nodiscard]] SetDescription set_complement(SetDescription child);

using MembershipFn = std::function<Membership(const Vec&)>;

/// Wraps an externally defined classifier. The caller vouches for soundness.
[[nodiscard]] SetDescription make_custom(int dim, Topology topology, std::string description, MembershipFn fn);

}  // namespace funnel::sets
