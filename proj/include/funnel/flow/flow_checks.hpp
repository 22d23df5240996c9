#pragma once

#include <span>
#include <vector>

#include "funnel/flow/flow_map.hpp"

namespace funnel::flow {

/// Samples of τ -> Φ_τ(x0) at τ_j = j δ (last sample clipped to t).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> points;
    /// Bound on how far the exact trajectory strays from the sample at the
    /// start of each step, over that step.
    double excursion = 0.0;
};

/// Throws std::invalid_argument for step <= 0.
Trajectory trajectory(const VectorField& field, const Vec& x0, double t, double step, double tol = kDefaultFlowTol);

struct PointPair {
    Vec x;
    Vec y;
};

/// e^{L |t|}: the Lipschitz constant of Φ_t implied by the field's constant.
double gronwall_bound(const VectorField& field, double t);

/// max_j |Φ_t(x_j) - Φ_t(y_j)| / |x_j - y_j|. Throws on an empty list or a
/// coincident pair.
double gronwall_check(const VectorField& field, std::span<const PointPair> pairs, double t,
                      double tol = kDefaultFlowTol);

/// |Φ_{-t}(Φ_t(x0)) - x0|.
double inverse_consistency(const VectorField& field, const Vec& x0, double t, double tol = kDefaultFlowTol);

}  // namespace funnel::flow
