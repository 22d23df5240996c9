#pragma once

#include <string>

#include "funnel/evolute/grid.hpp"
#include "funnel/flow/flow_map.hpp"
#include "funnel/sets/set_description.hpp"

namespace funnel::evolute {

/// closed: τ ranges over [0, t]; open: over (0, t).
enum class TimeMode { closed, open };

std::string to_string(TimeMode m);
TimeMode parse_time_mode(const std::string& s);

struct EvoluteOptions {
    /// τ sampling step; 0 picks h / sup|v| over the grid box (grid operations only).
    double dtau = 0.0;
    TimeMode mode = TimeMode::closed;
    /// Error bound trusted for one application of a sampled flow step.
    double tol = flow::kDefaultFlowTol;
};

/// Decides x ∈ S^t = ∪_{τ∈[0,t]} Φ_τ(S) through the backward trajectory
/// τ -> Φ_{-τ}(x). Throws std::invalid_argument for t < 0 or dtau <= 0.
sets::Membership evoluted_membership(const sets::SetDescription& set, const flow::VectorField& field, double t,
                                     const Vec& x, const EvoluteOptions& opts);

/// h / sup|v| over the box, or +inf for a field vanishing on it.
double default_dtau(const flow::VectorField& field, const Box& box, double h);

/// Step actually used by evolve_grid for these inputs.
double resolve_dtau(const flow::VectorField& field, const GridSpec& spec, const EvoluteOptions& opts, double t);

/// Classifies every cell of the grid against S^t; a cell gets IN or OUT
/// only if the verdict holds on the whole cell.
OccupancyGrid evolve_grid(const sets::SetDescription& set, const flow::VectorField& field, double t,
                          const GridSpec& spec, const EvoluteOptions& opts = {});

/// The image Φ_τ(S), described through y ∈ Φ_τ(S) iff Φ_{-τ}(y) ∈ S.
sets::SetDescription flow_image(const sets::SetDescription& set, const flow::VectorField& field, double tau,
                                double tol = flow::kDefaultFlowTol);

OccupancyGrid pushforward_set_grid(const sets::SetDescription& set, const flow::VectorField& field, double tau,
                                   const GridSpec& spec, double tol = flow::kDefaultFlowTol);

}  // namespace funnel::evolute
