#pragma once

#include <memory>
#include <optional>
#include <string>

#include "funnel/geometry.hpp"

namespace funnel::flow {

/// x -> linear * x + offset.
struct AffineMap {
    Mat linear;
    Vec offset;

    [[nodiscard]] Vec apply(const Vec& x) const { return linear * x + offset; }
};

enum class TimeDirection { forward, backward };

/// Radial bump profile: g = 1 on [0, 1/2], then 1 - smootherstep(2r - 1)
/// down to g(1) = g'(1) = g''(1) = 0.
double radial_profile(double r);
double radial_profile_derivative(double r);

/// Sup of |g| and |g'| on [0, 1].
inline constexpr double kRadialProfileSup = 1.0;
inline constexpr double kRadialProfileSlopeSup = 3.75;

namespace detail {
class FieldNode;
}

/// Immutable autonomous Lipschitz vector field.
///
/// Besides evaluation each variant reports a certified global Lipschitz
/// constant, sup-norm bounds over boxes, and one-sided growth rates
/// (bounds on the top eigenvalue of the symmetric part of ±Dv). The growth
/// rate is what spreads nearby trajectories apart: |Φ_s(x) - Φ_s(y)| <=
/// e^{rate |s|} |x - y|, which is never worse than e^{L |s|}.
class VectorField {
public:
    static VectorField constant(const Vec& c);
    static VectorField linear(const Mat& a);
    /// v(x, y) = omega (-y, x).
    static VectorField rotation(double omega);
    /// v(q) = g(|q|) q on the unit disk. Outside it the field is either zero
    /// (extend_by_zero) or undefined, in which case eval throws.
    static VectorField radial(int dim = 2, bool extend_by_zero = true);
    /// v(x) = inner(x - offset).
    static VectorField shifted(const VectorField& inner, const Vec& offset);
    /// v(x) = factor * inner(x).
    static VectorField scaled(const VectorField& inner, double factor);

    [[nodiscard]] int dim() const;
    [[nodiscard]] Vec eval(const Vec& x) const;
    [[nodiscard]] double lipschitz() const;
    [[nodiscard]] double sup_bound(const Box& box) const;
    /// Sup of the growth rate over the ball B(center, radius).
    [[nodiscard]] double growth_rate(const Vec& center, double radius, TimeDirection dir) const;
    /// Global growth rate.
    [[nodiscard]] double growth_rate(TimeDirection dir) const;
    /// Closed-form flow Φ_t when available.
    [[nodiscard]] std::optional<AffineMap> affine_flow(double t) const;
    [[nodiscard]] std::string describe() const;

private:
    explicit VectorField(std::shared_ptr<const detail::FieldNode> node);
    std::shared_ptr<const detail::FieldNode> node_;
};

/// sup over s in [0, t] of |Φ_s(x) - x| given |v(x)| = speed and Lipschitz
/// constant L: speed (e^{L t} - 1) / L.
double excursion_bound(double speed, double lipschitz, double t);

}  // namespace funnel::flow
