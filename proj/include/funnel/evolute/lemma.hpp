#pragma once

#include <cstddef>

#include "funnel/evolute/evolute.hpp"

namespace funnel::evolute {

struct LemmaResult {
    std::size_t violations = 0;
    /// Boundary-candidate cells of the S^t grid that were tested.
    std::size_t candidates = 0;
    /// Cells in the boundary band of S that were pushed forward.
    std::size_t band_cells = 0;
    std::size_t mapped_points = 0;
    /// Allowed distance h·√n + excursion.
    double threshold = 0.0;
    /// Largest candidate-to-nearest-mapped-point distance seen (capped at
    /// 2 × threshold for violating cells).
    double max_distance = 0.0;
};

/// Grid form of ∂(S^t) ⊂ (∂S)^t: every boundary candidate of the S^t grid
/// must lie near the forward sweep of the boundary band of S.
LemmaResult lemma_inclusion_check(const sets::SetDescription& set, const flow::VectorField& field, double t,
                                  const GridSpec& spec, const EvoluteOptions& opts = {});

}  // namespace funnel::evolute
