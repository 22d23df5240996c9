#include "funnel/evolute/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "funnel/parallel.hpp"

namespace funnel::evolute {

GridSpec::GridSpec(Box box_, Vec h_) : box(std::move(box_)), h(std::move(h_))
{
    if (h.size() != box.dim()) {
        throw std::invalid_argument("grid spacing dimension mismatch");
    }
    for (Eigen::Index k = 0; k < h.size(); ++k) {
        const double len = box.hi[k] - box.lo[k];
        if (!(h[k] > 0.0)) {
            throw std::invalid_argument("grid spacing must be positive");
        }
        if (!std::isfinite(len) || !(len > 0.0)) {
            throw std::invalid_argument("grid box must be bounded and nondegenerate");
        }
        const double cells = len / h[k];
        if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells)) {
            throw std::invalid_argument("grid box side is not a whole number of cells");
        }
    }
}

GridSpec::GridSpec(Box box_, double h_) : GridSpec(box_, Vec::Constant(box_.dim(), h_)) {}

OccupancyGrid::OccupancyGrid(const GridSpec& spec, GridMetadata meta)
    : box_(spec.box), h_(spec.h), meta_(std::move(meta))
{
    std::size_t total = 1;
    for (int k = 0; k < dim(); ++k) {
        extents_[static_cast<std::size_t>(k)] =
            static_cast<std::size_t>(std::llround((box_.hi[k] - box_.lo[k]) / h_[k]));
        total *= extents_[static_cast<std::size_t>(k)];
    }
    cells_.assign(total, Status::unknown);
}

std::array<std::size_t, kMaxDim> OccupancyGrid::unravel(std::size_t index) const
{
    std::array<std::size_t, kMaxDim> idx{};
    for (int k = 0; k < dim(); ++k) {
        const std::size_t e = extents_[static_cast<std::size_t>(k)];
        idx[static_cast<std::size_t>(k)] = index % e;
        index /= e;
    }
    return idx;
}

std::size_t OccupancyGrid::ravel(const std::array<std::size_t, kMaxDim>& idx) const
{
    std::size_t index = 0;
    for (int k = dim() - 1; k >= 0; --k) {
        index = index * extents_[static_cast<std::size_t>(k)] + idx[static_cast<std::size_t>(k)];
    }
    return index;
}

Vec OccupancyGrid::cell_center(std::size_t index) const
{
    const auto idx = unravel(index);
    Vec c(dim());
    for (int k = 0; k < dim(); ++k) {
        c[k] = box_.lo[k] + (static_cast<double>(idx[static_cast<std::size_t>(k)]) + 0.5) * h_[k];
    }
    return c;
}

double OccupancyGrid::cell_volume() const { return h_.prod(); }

double OccupancyGrid::half_diagonal() const { return 0.5 * h_.norm() * (1.0 + 1e-15); }

std::size_t OccupancyGrid::count(Status s) const
{
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

std::vector<bool> OccupancyGrid::boundary_candidates() const
{
    std::vector<bool> out(cells_.size(), false);
    const int n = dim();
    std::size_t neighborhood = 1;
    for (int k = 0; k < n; ++k) {
        neighborhood *= 3;
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Status s = cells_[i];
        if (s == Status::unknown) {
            out[i] = true;
            continue;
        }
        const Status opposite = s == Status::in ? Status::out : Status::in;
        const auto idx = unravel(i);
        for (std::size_t code = 0; code < neighborhood && !out[i]; ++code) {
            std::array<std::size_t, kMaxDim> nb = idx;
            std::size_t c = code;
            bool valid = true;
            bool self = true;
            for (int k = 0; k < n; ++k) {
                const int offset = static_cast<int>(c % 3) - 1;
                c /= 3;
                self = self && offset == 0;
                const auto ku = static_cast<std::size_t>(k);
                if ((offset < 0 && nb[ku] == 0) || (offset > 0 && nb[ku] + 1 >= extents_[ku])) {
                    valid = false;
                    break;
                }
                nb[ku] = static_cast<std::size_t>(static_cast<long long>(nb[ku]) + offset);
            }
            if (valid && !self && cells_[ravel(nb)] == opposite) {
                out[i] = true;
            }
        }
    }
    return out;
}

Interval boundary_measure_upper(const OccupancyGrid& grid)
{
    const auto candidates = grid.boundary_candidates();
    const auto n = static_cast<double>(std::count(candidates.begin(), candidates.end(), true));
    return {0.0, n == 0.0 ? 0.0 : Interval::up(n * grid.cell_volume())};
}

OccupancyGrid membership_grid(const sets::SetDescription& set, const GridSpec& spec)
{
    if (set.dim() != spec.box.dim()) {
        throw std::invalid_argument("set and grid dimensions differ");
    }
    OccupancyGrid grid(spec, {"set", set.describe(), "", 0.0, 0.0, ""});
    const double rho = grid.half_diagonal();
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto m = set.membership(grid.cell_center(i));
            grid.set(i, m.status != Status::unknown && m.margin > rho ? m.status : Status::unknown);
        }
    });
    return grid;
}

}  // namespace funnel::evolute
