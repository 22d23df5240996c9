#pragma once

#include <span>
#include <string>

#include "funnel/evolute/grid.hpp"
#include "funnel/exact/interval_union.hpp"

namespace funnel::scenarios {

enum class PgmFormat { p2, p5 };

PgmFormat parse_pgm_format(const std::string& s);

/// Graymap of a 2-D grid: IN = 0, UNKNOWN = 128, OUT = 255, top row at
/// max y. P2 starts with the one-line header "P2 W H 255".
/// Throws std::invalid_argument for grids that are not 2-D.
std::string raster_bytes(const evolute::OccupancyGrid& grid, PgmFormat format = PgmFormat::p2);

/// Writes raster_bytes to path; I/O failures name the path.
void render_raster(const evolute::OccupancyGrid& grid, const std::string& path, PgmFormat format = PgmFormat::p2);

/// Open intervals drawn as bars over [a, b].
std::string intervals_svg(std::span<const exact::OpenInterval> intervals, const exact::Rational& a,
                          const exact::Rational& b, const std::string& title);

}  // namespace funnel::scenarios
