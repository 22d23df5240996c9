#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "funnel/density/quadrature.hpp"
#include "funnel/flow/flow_map.hpp"

namespace funnel::density {

struct DensitySample {
    double radius = 0.0;
    /// Enclosure of ℒⁿ(B(x, r) \ S) / ℒⁿ(B(x, r)), inside [0, 1].
    Interval ratio;
    AreaEnclosure area;
};

struct DensityProfile {
    Vec point;
    std::vector<DensitySample> samples;  // radii strictly decreasing
};

/// Throws std::invalid_argument unless radii are positive and strictly decreasing.
DensityProfile density_profile(const sets::SetDescription& set, const Vec& x, const std::vector<double>& radii,
                               int max_depth);

enum class LebesgueClass { lebesgue_likely, not_lebesgue_likely, inconclusive };

std::string to_string(LebesgueClass c);

struct ClassifierParams {
    double theta = 0.95;
    double eta = 0.02;
};

/// Finite-radius proxy for "x is a Lebesgue point of the complement".
/// NOT_LEBESGUE_LIKELY when the ratio upper bound at the smallest radius is
/// at most theta - eta; LEBESGUE_LIKELY when its lower bound is at least
/// theta + eta and the last three ratios show no certified decrease.
LebesgueClass classify_lebesgue_of_complement(const DensityProfile& profile, const ClassifierParams& params = {});

struct InvariancePoint {
    Vec point;
    Vec image;
    LebesgueClass before = LebesgueClass::inconclusive;
    LebesgueClass after = LebesgueClass::inconclusive;
    DensityProfile profile_before;
    DensityProfile profile_after;
    /// One side LEBESGUE_LIKELY and the other NOT_LEBESGUE_LIKELY.
    bool flip = false;
};

struct InvarianceResult {
    std::vector<InvariancePoint> points;
    std::size_t flips = 0;
};

/// Classifies x against S and Φ_t(x) against Φ_t(S) for each test point.
InvarianceResult lipeomorphism_invariance_check(const sets::SetDescription& set, const flow::VectorField& field,
                                                double t, const std::vector<Vec>& points,
                                                const std::vector<double>& radii, int max_depth,
                                                const ClassifierParams& params = {},
                                                double tol = flow::kDefaultFlowTol);

/// [[r, lo, hi], ...]
nlohmann::json profile_to_json(const DensityProfile& profile);

/// Ratio enclosures against log2 r as a standalone SVG document.
std::string profile_svg(const DensityProfile& profile, const std::string& title);

}  // namespace funnel::density
