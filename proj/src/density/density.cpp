#include "funnel/density/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "funnel/evolute/evolute.hpp"

namespace funnel::density {

DensityProfile density_profile(const sets::SetDescription& set, const Vec& x, const std::vector<double>& radii,
                               int max_depth)
{
    if (radii.empty()) {
        throw std::invalid_argument("density profile needs at least one radius");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
            throw std::invalid_argument("radii must be positive and strictly decreasing");
        }
    }
    DensityProfile profile;
    profile.point = x;
    for (double r : radii) {
        DensitySample s;
        s.radius = r;
        s.area = area_enclosure(set, x, r, max_depth);
        const Interval vol = ball_volume(set.dim(), r);
        const Interval one = Interval::point(1.0);
        s.ratio = (one - s.area.area / vol).clamped(0.0, 1.0);
        profile.samples.push_back(s);
    }
    return profile;
}

std::string to_string(LebesgueClass c)
{
    switch (c) {
    case LebesgueClass::lebesgue_likely:
        return "LEBESGUE_LIKELY";
    case LebesgueClass::not_lebesgue_likely:
        return "NOT_LEBESGUE_LIKELY";
    case LebesgueClass::inconclusive:
        break;
    }
    return "INCONCLUSIVE";
}

LebesgueClass classify_lebesgue_of_complement(const DensityProfile& profile, const ClassifierParams& params)
{
    if (profile.samples.empty()) {
        throw std::invalid_argument("cannot classify an empty profile");
    }
    if (!(params.theta > 0.0 && params.theta < 1.0) || !(params.eta >= 0.0)) {
        throw std::invalid_argument("threshold must lie in (0, 1) and margin must be nonnegative");
    }
    const auto& s = profile.samples;
    const Interval last = s.back().ratio;
    if (last.hi <= params.theta - params.eta) {
        return LebesgueClass::not_lebesgue_likely;
    }
    if (last.lo >= params.theta + params.eta) {
        const std::size_t tail = std::min<std::size_t>(3, s.size());
        for (std::size_t i = s.size() - tail; i + 1 < s.size(); ++i) {
            if (s[i + 1].ratio.hi < s[i].ratio.lo) {
                return LebesgueClass::inconclusive;
            }
        }
        return LebesgueClass::lebesgue_likely;
    }
    return LebesgueClass::inconclusive;
}

InvarianceResult lipeomorphism_invariance_check(const sets::SetDescription& set, const flow::VectorField& field,
                                                double t, const std::vector<Vec>& points,
                                                const std::vector<double>& radii, int max_depth,
                                                const ClassifierParams& params, double tol)
{
    const sets::SetDescription image = evolute::flow_image(set, field, t, tol);
    flow::IntegratorOptions io;
    io.tol = tol;
    const flow::FlowMap phi(field, t, io);

    InvarianceResult result;
    for (const Vec& x : points) {
        InvariancePoint p;
        p.point = x;
        p.image = phi(x);
        p.profile_before = density_profile(set, x, radii, max_depth);
        p.profile_after = density_profile(image, p.image, radii, max_depth);
        p.before = classify_lebesgue_of_complement(p.profile_before, params);
        p.after = classify_lebesgue_of_complement(p.profile_after, params);
        const auto L = LebesgueClass::lebesgue_likely;
        const auto N = LebesgueClass::not_lebesgue_likely;
        p.flip = (p.before == L && p.after == N) || (p.before == N && p.after == L);
        result.flips += p.flip ? 1 : 0;
        result.points.push_back(std::move(p));
    }
    return result;
}

nlohmann::json profile_to_json(const DensityProfile& profile)
{
    auto arr = nlohmann::json::array();
    for (const auto& s : profile.samples) {
        arr.push_back({s.radius, s.ratio.lo, s.ratio.hi});
    }
    return arr;
}

std::string profile_svg(const DensityProfile& profile, const std::string& title)
{
    constexpr double W = 480, H = 320, pad = 48;
    const auto& s = profile.samples;
    double xmin = std::log2(s.back().radius);
    double xmax = std::log2(s.front().radius);
    if (xmax - xmin < 1e-9) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    auto px = [&](double r) { return pad + (std::log2(r) - xmin) / (xmax - xmin) * (W - 2 * pad); };
    auto py = [&](double v) { return H - pad - v * (H - 2 * pad); };

    std::ostringstream os;
    os.precision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << pad << "\" y=\"20\" font-family=\"monospace\" font-size=\"12\">" << title << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << W - pad << "\" y2=\"" << py(0)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << py(0) << "\" x2=\"" << pad << "\" y2=\"" << py(1)
       << "\" stroke=\"black\"/>\n";
    for (double v : {0.0, 0.5, 1.0}) {
        os << "<text x=\"8\" y=\"" << py(v) + 4 << "\" font-family=\"monospace\" font-size=\"10\">" << v
           << "</text>\n";
    }
    for (const auto& sample : s) {
        const double x = px(sample.radius);
        os << "<line x1=\"" << x << "\" y1=\"" << py(sample.ratio.lo) << "\" x2=\"" << x << "\" y2=\""
           << py(sample.ratio.hi) << "\" stroke=\"steelblue\" stroke-width=\"3\"/>\n";
        os << "<text x=\"" << x - 12 << "\" y=\"" << H - pad + 16 << "\" font-family=\"monospace\" font-size=\"10\">"
           << std::log2(sample.radius) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 - 20 << "\" y=\"" << H - 8 << "\" font-family=\"monospace\" font-size=\"10\">log2 r</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace funnel::density
