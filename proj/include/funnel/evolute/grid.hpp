#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "funnel/geometry.hpp"
#include "funnel/interval.hpp"
#include "funnel/sets/set_description.hpp"

namespace funnel::evolute {

using sets::Status;

/// Box plus per-axis cell width. The box must be an integer number of cells
/// along every axis.
struct GridSpec {
    Box box;
    Vec h;

    GridSpec(Box box_, Vec h_);
    GridSpec(Box box_, double h_);
};

struct GridMetadata {
    std::string kind;  // "set", "evolute", "pushforward"
    std::string set;
    std::string field;
    double t = 0.0;
    double dtau = 0.0;
    std::string mode;
};

/// Dense tri-state grid. A cell marked IN lies entirely inside the
/// classified set, a cell marked OUT entirely outside; UNKNOWN makes no claim.
class OccupancyGrid {
public:
    explicit OccupancyGrid(const GridSpec& spec, GridMetadata meta = {});

    [[nodiscard]] const Box& box() const noexcept { return box_; }
    [[nodiscard]] const Vec& h() const noexcept { return h_; }
    [[nodiscard]] int dim() const noexcept { return box_.dim(); }
    [[nodiscard]] std::size_t extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

    [[nodiscard]] Status at(std::size_t index) const { return cells_[index]; }
    void set(std::size_t index, Status s) { cells_[index] = s; }
    [[nodiscard]] std::span<const Status> cells() const noexcept { return cells_; }
    [[nodiscard]] std::span<Status> cells() noexcept { return cells_; }

    /// Axis 0 varies fastest.
    [[nodiscard]] std::array<std::size_t, kMaxDim> unravel(std::size_t index) const;
    [[nodiscard]] std::size_t ravel(const std::array<std::size_t, kMaxDim>& idx) const;
    [[nodiscard]] Vec cell_center(std::size_t index) const;

    [[nodiscard]] double cell_volume() const;
    /// Half the cell diagonal: every point of a cell is this close to its center.
    [[nodiscard]] double half_diagonal() const;

    [[nodiscard]] std::size_t count(Status s) const;
    [[nodiscard]] double volume(Status s) const { return static_cast<double>(count(s)) * cell_volume(); }

    /// UNKNOWN cells plus IN/OUT cells touching (full 3^n - 1 neighborhood)
    /// a cell of the opposite status.
    [[nodiscard]] std::vector<bool> boundary_candidates() const;

    [[nodiscard]] const GridMetadata& metadata() const noexcept { return meta_; }
    void set_metadata(GridMetadata meta) { meta_ = std::move(meta); }

private:
    Box box_;
    Vec h_;
    std::array<std::size_t, kMaxDim> extents_{};
    std::vector<Status> cells_;
    GridMetadata meta_;
};

/// [0, volume of boundary candidates]. The upper end bounds the measure of
/// the boundary of the classified set inside the grid box.
[[nodiscard]] Interval boundary_measure_upper(const OccupancyGrid& grid);

/// Cellwise classification of S itself.
[[nodiscard]] OccupancyGrid membership_grid(const sets::SetDescription& set, const GridSpec& spec);

}  // namespace funnel::evolute
