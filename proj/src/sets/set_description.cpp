#include "funnel/sets/set_description.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "funnel/exact/cantor.hpp"

namespace funnel::sets {

std::string to_string(Status s)
{
    switch (s) {
    case Status::in:
        return "IN";
    case Status::out:
        return "OUT";
    case Status::unknown:
        return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string to_string(Topology t) { return t == Topology::open ? "open" : "closed"; }

SetDescription::SetDescription(std::shared_ptr<const detail::SetNode> node, Topology topology)
    : node_(std::move(node)), topology_(topology)
{
    if (!node_) {
        throw std::invalid_argument("set description without a node");
    }
}

std::string SetDescription::describe() const { return node_->describe() + " [" + to_string(topology_) + "]"; }

namespace {

std::string fmt_vec(const Vec& v)
{
    std::ostringstream os;
    os << "(";
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        os << (k ? "," : "") << v[k];
    }
    os << ")";
    return os.str();
}

Membership in_or_unknown(double margin) { return margin > 0.0 ? Membership{Status::in, margin} : Membership{}; }
Membership out_or_unknown(double margin) { return margin > 0.0 ? Membership{Status::out, margin} : Membership{}; }

class BoxNode final : public detail::SetNode {
public:
    explicit BoxNode(Box box) : box_(std::move(box))
    {
        for (Eigen::Index k = 0; k < box_.lo.size(); ++k) {
            for (double b : {box_.lo[k], box_.hi[k]}) {
                if (std::isfinite(b)) {
                    scale_ = std::max(scale_, std::abs(b));
                }
            }
        }
    }

    Membership membership(const Vec& x) const override
    {
        const double scale = scale_ + x.cwiseAbs().maxCoeff();
        if (box_.contains(x)) {
            return in_or_unknown(round_down_margin(box_.depth_inside(x), scale));
        }
        return out_or_unknown(round_down_margin(box_.distance_outside(x), scale));
    }
    int dim() const override { return box_.dim(); }
    std::string describe() const override { return "box" + fmt_vec(box_.lo) + "-" + fmt_vec(box_.hi); }

private:
    Box box_;
    double scale_ = 0.0;
};

class HalfSpaceNode final : public detail::SetNode {
public:
    HalfSpaceNode(Vec normal, double offset) : normal_(std::move(normal)), offset_(offset), norm_(normal_.norm())
    {
        if (!(norm_ > 0.0)) {
            throw std::invalid_argument("half-space normal must be nonzero");
        }
    }

    Membership membership(const Vec& x) const override
    {
        const double slack = (offset_ - normal_.dot(x)) / norm_;
        const double scale = std::abs(offset_) / norm_ + x.norm();
        if (slack > 0.0) {
            return in_or_unknown(round_down_margin(slack, scale));
        }
        return out_or_unknown(round_down_margin(-slack, scale));
    }
    int dim() const override { return static_cast<int>(normal_.size()); }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "halfspace{n=" << fmt_vec(normal_) << ", n.x<" << offset_ << "}";
        return os.str();
    }

private:
    Vec normal_;
    double offset_;
    double norm_;
};

class DiskNode final : public detail::SetNode {
public:
    DiskNode(Vec center, double radius) : center_(std::move(center)), radius_(radius)
    {
        if (!(radius_ > 0.0)) {
            throw std::invalid_argument("disk radius must be positive");
        }
    }

    Membership membership(const Vec& x) const override
    {
        const double d = (x - center_).norm();
        const double scale = d + radius_;
        if (d < radius_) {
            return in_or_unknown(round_down_margin(radius_ - d, scale));
        }
        return out_or_unknown(round_down_margin(d - radius_, scale));
    }
    int dim() const override { return static_cast<int>(center_.size()); }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "disk{c=" << fmt_vec(center_) << ", r=" << radius_ << "}";
        return os.str();
    }

private:
    Vec center_;
    double radius_;
};

class BallUnionNode final : public detail::SetNode {
public:
    BallUnionNode(std::vector<Ball> balls, std::optional<TailHull> tail) : tail_(std::move(tail))
    {
        if (balls.empty() && !tail_) {
            throw std::invalid_argument("ball union needs at least one ball or a tail hull");
        }
        dim_ = !balls.empty() ? static_cast<int>(balls.front().center.size()) : tail_->hull.dim();
        if (dim_ < 1 || dim_ > kMaxDim) {
            throw std::invalid_argument("ball union dimension out of range");
        }
        for (const auto& b : balls) {
            if (static_cast<int>(b.center.size()) != dim_) {
                throw std::invalid_argument("ball union with mixed dimensions");
            }
            if (b.radius.sign() <= 0) {
                throw std::invalid_argument("ball radius must be positive");
            }
            Packed p;
            p.center = Vec(dim_);
            exact::Rational center_error;
            for (int k = 0; k < dim_; ++k) {
                p.center[k] = b.center[static_cast<std::size_t>(k)].to_double();
                center_error += (exact::Rational::from_double(p.center[k]) - b.center[static_cast<std::size_t>(k)]).abs();
            }
            p.center_error = center_error.to_double_up();
            p.radius_lo = b.radius.to_double_down();
            p.radius_hi = b.radius.to_double_up();
            packed_.push_back(p);
        }
        if (tail_ && tail_->hull.dim() != dim_) {
            throw std::invalid_argument("tail hull dimension mismatch");
        }
    }

    Membership membership(const Vec& x) const override
    {
        double best_in = 0.0;
        double min_out = std::numeric_limits<double>::infinity();
        const double xs = x.cwiseAbs().maxCoeff();
        for (const auto& b : packed_) {
            const double d = (x - b.center).norm();
            const double scale = d + b.radius_hi + xs;
            const double in_margin = round_down_margin(b.radius_lo - d - b.center_error, scale);
            if (in_margin > best_in) {
                best_in = in_margin;
            }
            min_out = std::min(min_out, round_down_margin(d - b.radius_hi - b.center_error, scale));
        }
        if (best_in > 0.0) {
            return {Status::in, best_in};
        }
        if (tail_) {
            const double d = tail_->hull.distance_outside(x);
            min_out = std::min(min_out, std::isfinite(d) ? round_down_margin(d, d + xs) : 0.0);
        }
        return out_or_unknown(min_out);
    }
    int dim() const override { return dim_; }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "ball_union{" << packed_.size() << " explicit balls";
        if (tail_) {
            os << ", tail hull " << fmt_vec(tail_->hull.lo) << "-" << fmt_vec(tail_->hull.hi)
               << ", tail radius <= " << tail_->radius_bound.str();
        }
        os << "}";
        return os.str();
    }

private:
    struct Packed {
        Vec center;
        double center_error = 0.0;
        double radius_lo = 0.0;
        double radius_hi = 0.0;
    };
    std::vector<Packed> packed_;
    std::optional<TailHull> tail_;
    int dim_ = 0;
};

class BooleanNode final : public detail::SetNode {
public:
    BooleanNode(BooleanOp op, std::vector<SetDescription> children) : op_(op), children_(std::move(children)) {}

    Membership membership(const Vec& x) const override
    {
        switch (op_) {
        case BooleanOp::set_complement: {
            const Membership m = children_.front().membership(x);
            if (m.status == Status::in) {
                return {Status::out, m.margin};
            }
            if (m.status == Status::out) {
                return {Status::in, m.margin};
            }
            return {};
        }
        case BooleanOp::set_union: {
            double best_in = 0.0;
            double min_out = std::numeric_limits<double>::infinity();
            bool all_out = true;
            for (const auto& c : children_) {
                const Membership m = c.membership(x);
                if (m.status == Status::in) {
                    best_in = std::max(best_in, m.margin);
                } else if (m.status == Status::out) {
                    min_out = std::min(min_out, m.margin);
                } else {
                    all_out = false;
                }
            }
            if (best_in > 0.0) {
                return {Status::in, best_in};
            }
            return all_out ? Membership{Status::out, min_out} : Membership{};
        }
        case BooleanOp::set_intersection: {
            double best_out = 0.0;
            double min_in = std::numeric_limits<double>::infinity();
            bool all_in = true;
            for (const auto& c : children_) {
                const Membership m = c.membership(x);
                if (m.status == Status::out) {
                    best_out = std::max(best_out, m.margin);
                } else if (m.status == Status::in) {
                    min_in = std::min(min_in, m.margin);
                } else {
                    all_in = false;
                }
            }
            if (best_out > 0.0) {
                return {Status::out, best_out};
            }
            return all_in ? Membership{Status::in, min_in} : Membership{};
        }
        }
        return {};
    }
    int dim() const override { return children_.front().dim(); }
    std::string describe() const override
    {
        std::string name = op_ == BooleanOp::set_union          ? "union"
                           : op_ == BooleanOp::set_intersection ? "intersection"
                                                                : "complement";
        std::string out = name + "(";
        for (std::size_t i = 0; i < children_.size(); ++i) {
            out += (i ? ", " : "") + children_[i].describe();
        }
        return out + ")";
    }

private:
    BooleanOp op_;
    std::vector<SetDescription> children_;
};

class CustomNode final : public detail::SetNode {
public:
    CustomNode(int dim, std::string description, MembershipFn fn)
        : dim_(dim), description_(std::move(description)), fn_(std::move(fn))
    {
        if (!fn_) {
            throw std::invalid_argument("custom set without a classifier");
        }
    }
    Membership membership(const Vec& x) const override { return fn_(x); }
    int dim() const override { return dim_; }
    std::string describe() const override { return description_; }

private:
    int dim_;
    std::string description_;
    MembershipFn fn_;
};

}  // namespace

SetDescription make_box(const Box& box, Topology topology)
{
    return {std::make_shared<BoxNode>(box), topology};
}

SetDescription make_half_space(const Vec& normal, double offset, Topology topology)
{
    return {std::make_shared<HalfSpaceNode>(normal, offset), topology};
}

SetDescription make_disk(const Vec& center, double radius, Topology topology)
{
    return {std::make_shared<DiskNode>(center, radius), topology};
}

SetDescription make_ball_union(std::vector<Ball> balls, std::optional<TailHull> tail, Topology topology)
{
    return {std::make_shared<BallUnionNode>(std::move(balls), std::move(tail)), topology};
}

std::vector<Ball> example_balls(std::uint64_t n, bool descending_rows)
{
    std::vector<Ball> balls;
    balls.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        const exact::Rational y = descending_rows ? exact::Rational(-static_cast<long long>(i)) : exact::Rational(0);
        balls.push_back({{exact::example_center(i), y}, exact::example_radius(i)});
    }
    return balls;
}

TailHull example_tail(std::uint64_t n, bool descending_rows)
{
    if (n == 0) {
        throw std::invalid_argument("truncation index must be positive");
    }
    const exact::Rational r = exact::example_radius(n + 1);
    const double rd = r.to_double_up();
    if (descending_rows) {
        const double top = (exact::Rational(-static_cast<long long>(n) - 1) + r).to_double_up();
        return {Box(make_vec({-rd, -std::numeric_limits<double>::infinity()}), make_vec({1.0 + rd, top})), r};
    }
    return {Box(make_vec({-rd, -rd}), make_vec({(exact::Rational(1) + r).to_double_up(), rd})), r};
}

SetDescription example_plane_set(std::uint64_t n)
{
    return make_ball_union(example_balls(n, false), example_tail(n, false), Topology::open);
}

SetDescription example_unbounded_set(std::uint64_t n)
{
    return make_ball_union(example_balls(n, true), example_tail(n, true), Topology::open);
}

SetDescription boolean_combination(BooleanOp op, std::vector<SetDescription> children)
{
    if (children.empty()) {
        throw std::invalid_argument("boolean combination needs at least one child");
    }
    if (op == BooleanOp::set_complement && children.size() != 1) {
        throw std::invalid_argument("complement takes exactly one child");
    }
    const int dim = children.front().dim();
    bool all_open = true;
    bool all_closed = true;
    for (const auto& c : children) {
        if (c.dim() != dim) {
            throw std::invalid_argument("boolean combination with mixed dimensions");
        }
        all_open = all_open && c.topology() == Topology::open;
        all_closed = all_closed && c.topology() == Topology::closed;
    }
    Topology topology = all_open ? Topology::open : Topology::closed;
    if (op == BooleanOp::set_complement) {
        topology = all_open ? Topology::closed : Topology::open;
    } else if (!all_open && !all_closed) {
        topology = Topology::closed;
    }
    return {std::make_shared<BooleanNode>(op, std::move(children)), topology};
}

SetDescription set_union(std::vector<SetDescription> children)
{
    return boolean_combination(BooleanOp::set_union, std::move(children));
}

SetDescription set_intersection(std::vector<SetDescription> children)
{
    return boolean_combination(BooleanOp::set_intersection, std::move(children));
}

SetDescription set_complement(SetDescription child)
{
    return boolean_combination(BooleanOp::set_complement, {std::move(child)});
}

SetDescription make_custom(int dim, Topology topology, std::string description, MembershipFn fn)
{
    return {std::make_shared<CustomNode>(dim, std::move(description), std::move(fn)), topology};
}

}  // namespace funnel::sets
