#include "funnel/evolute/lemma.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "funnel/parallel.hpp"

namespace funnel::evolute {

namespace {

using Key = std::array<std::int64_t, kMaxDim>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept
    {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

class PointHash {
public:
    PointHash(std::vector<Vec> points, double cell) : points_(std::move(points)), cell_(cell)
    {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            buckets_[key(points_[i])].push_back(i);
        }
    }

    /// Distance from z to the nearest stored point, if it is below cell.
    [[nodiscard]] double nearest_within(const Vec& z) const
    {
        const Key base = key(z);
        const int n = static_cast<int>(z.size());
        std::size_t neighborhood = 1;
        for (int k = 0; k < n; ++k) {
            neighborhood *= 3;
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t code = 0; code < neighborhood; ++code) {
            Key k = base;
            std::size_t c = code;
            for (int a = 0; a < n; ++a) {
                k[static_cast<std::size_t>(a)] += static_cast<std::int64_t>(c % 3) - 1;
                c /= 3;
            }
            const auto it = buckets_.find(k);
            if (it == buckets_.end()) {
                continue;
            }
            for (auto i : it->second) {
                best = std::min(best, (points_[i] - z).norm());
            }
        }
        return best;
    }

private:
    [[nodiscard]] Key key(const Vec& p) const
    {
        Key k{};
        for (Eigen::Index a = 0; a < p.size(); ++a) {
            k[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(std::floor(p[a] / cell_));
        }
        return k;
    }

    std::vector<Vec> points_;
    double cell_;
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
};

}  // namespace

LemmaResult lemma_inclusion_check(const sets::SetDescription& set, const flow::VectorField& field, double t,
                                  const GridSpec& spec, const EvoluteOptions& opts)
{
    const OccupancyGrid evolved = evolve_grid(set, field, t, spec, opts);
    const auto candidates = evolved.boundary_candidates();
    const double dtau = evolved.metadata().dtau;

    // Band of ∂S on a grid enlarged so that boundary pieces flowing into the
    // window from outside are included.
    const double reach = t * field.sup_bound(spec.box);
    Vec lo = spec.box.lo;
    Vec hi = spec.box.hi;
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
        const double pad = (std::ceil(reach / spec.h[k]) + 1.0) * spec.h[k];
        lo[k] -= pad;
        hi[k] += pad;
    }
    const OccupancyGrid base = membership_grid(set, GridSpec(Box(lo, hi), spec.h));
    const auto band = base.boundary_candidates();
    std::vector<std::size_t> band_cells;
    for (std::size_t i = 0; i < band.size(); ++i) {
        if (band[i]) {
            band_cells.push_back(i);
        }
    }

    std::size_t steps = 0;
    double last_dt = 0.0;
    if (t > 0.0) {
        steps = static_cast<std::size_t>(std::ceil(t / dtau - 1e-9));
        last_dt = t - static_cast<double>(steps - 1) * dtau;
        if (last_dt <= 0.0) {
            last_dt = dtau;
        }
    }
    flow::IntegratorOptions io;
    io.tol = opts.tol;
    const flow::FlowMap full(field, dtau, io);
    const flow::FlowMap last(field, last_dt, io);
    const double lip = field.lipschitz();
    const std::size_t per_cell = steps + 1;

    std::vector<Vec> mapped(band_cells.size() * per_cell);
    std::vector<double> excursion(band_cells.size(), 0.0);
    parallel_for(band_cells.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            Vec p = base.cell_center(band_cells[c]);
            double worst = 0.0;
            for (std::size_t j = 0; j <= steps; ++j) {
                mapped[c * per_cell + j] = p;
                if (j == steps) {
                    break;
                }
                const double dt = j + 1 < steps ? dtau : last_dt;
                worst = std::max(worst, flow::excursion_bound(field.eval(p).norm(), lip, dt));
                p = (j + 1 < steps ? full : last)(p);
            }
            excursion[c] = worst;
        }
    });

    LemmaResult result;
    result.band_cells = band_cells.size();
    result.mapped_points = mapped.size();
    const double exc = excursion.empty() ? 0.0 : *std::max_element(excursion.begin(), excursion.end());
    const double drift = full.closed_form() ? 0.0 : static_cast<double>(steps) * opts.tol;
    result.threshold = spec.h.norm() + exc + drift;

    const PointHash hash(std::move(mapped), result.threshold);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i]) {
            continue;
        }
        ++result.candidates;
        const double d = hash.nearest_within(evolved.cell_center(i));
        if (d > result.threshold) {
            ++result.violations;
            result.max_distance = std::max(result.max_distance, std::min(d, 2.0 * result.threshold));
        } else {
            result.max_distance = std::max(result.max_distance, d);
        }
    }
    return result;
}

}  // namespace funnel::evolute
