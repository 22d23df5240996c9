#pragma once

#include <cfloat>
#include <cmath>
#include <initializer_list>

#include <Eigen/Dense>

namespace funnel {

inline constexpr int kMaxDim = 4;

// Fixed-capacity storage: no heap traffic in the per-cell hot loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

Vec make_vec(std::initializer_list<double> values);

/// Axis-aligned box; bounds may be infinite.
struct Box {
    Vec lo;
    Vec hi;

    Box() = default;
    Box(Vec lo_, Vec hi_);

    [[nodiscard]] int dim() const { return static_cast<int>(lo.size()); }
    [[nodiscard]] double volume() const;
    [[nodiscard]] bool contains(const Vec& x) const;
    /// Euclidean distance from x to the box (0 inside).
    [[nodiscard]] double distance_outside(const Vec& x) const;
    /// Distance from x to the box complement (0 outside).
    [[nodiscard]] double depth_inside(const Vec& x) const;
    /// Largest |x| over the box (infinite for unbounded boxes).
    [[nodiscard]] double max_norm() const;
};

/// Subtracts a few ulps of slack from a distance computed in floating point,
/// clamping at zero; `scale` is the magnitude of the coordinates involved.
inline double round_down_margin(double margin, double scale)
{
    const double r = margin - 8.0 * DBL_EPSILON * (std::abs(margin) + scale);
    return r > 0.0 ? r : 0.0;
}

}  // namespace funnel
