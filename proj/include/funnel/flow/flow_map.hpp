#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "funnel/flow/vector_field.hpp"

namespace funnel::flow {

inline constexpr double kDefaultFlowTol = 1e-10;

struct IntegratorOptions {
    /// Target global error of the returned point.
    double tol = kDefaultFlowTol;
    /// Steps shorter than min_step * max(1, |t|) abort the integration.
    double min_step = 1e-13;
    std::size_t max_steps = 5'000'000;
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double last_step = 0.0;
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dormand–Prince 5(4) with PI step control; negative t integrates -v.
Vec integrate_adaptive(const VectorField& field, const Vec& x0, double t, const IntegratorOptions& opts = {},
                       IntegrationStats* stats = nullptr);

/// Classical fourth-order Runge–Kutta with `steps` equal steps.
Vec integrate_rk4(const VectorField& field, const Vec& x0, double t, std::size_t steps);

/// The time-t flow map of a field, with closed forms precomputed when the
/// field admits one (constant, linear, rotation and their shifts/scalings).
class FlowMap {
public:
    FlowMap(VectorField field, double t, IntegratorOptions opts = {});

    [[nodiscard]] Vec operator()(const Vec& x) const;
    [[nodiscard]] double time() const noexcept { return t_; }
    [[nodiscard]] bool closed_form() const noexcept { return affine_.has_value(); }
    [[nodiscard]] const VectorField& field() const noexcept { return field_; }
    /// Error bound assumed for one application.
    [[nodiscard]] double tolerance() const noexcept { return opts_.tol; }

private:
    VectorField field_;
    double t_;
    IntegratorOptions opts_;
    std::optional<AffineMap> affine_;
};

/// Φ^v_t(x0) with global error at most tol.
Vec flow_map(const VectorField& field, const Vec& x0, double t, double tol = kDefaultFlowTol);

}  // namespace funnel::flow
