#include "funnel/scenarios/render.hpp"

#include <sstream>
#include <stdexcept>

#include "funnel/scenarios/report.hpp"

namespace funnel::scenarios {

PgmFormat parse_pgm_format(const std::string& s)
{
    if (s == "P2") {
        return PgmFormat::p2;
    }
    if (s == "P5") {
        return PgmFormat::p5;
    }
    throw ConfigError("raster format must be \"P2\" or \"P5\", got '" + s + "'");
}

namespace {

unsigned char shade(sets::Status s)
{
    switch (s) {
    case sets::Status::in:
        return 0;
    case sets::Status::out:
        return 255;
    case sets::Status::unknown:
        break;
    }
    return 128;
}

}  // namespace

std::string raster_bytes(const evolute::OccupancyGrid& grid, PgmFormat format)
{
    if (grid.dim() != 2) {
        throw std::invalid_argument("rasters need a 2-D grid");
    }
    const std::size_t w = grid.extent(0);
    const std::size_t h = grid.extent(1);
    std::string out = std::string(format == PgmFormat::p2 ? "P2" : "P5") + " " + std::to_string(w) + " " +
                      std::to_string(h) + " 255\n";
    out.reserve(out.size() + w * h * (format == PgmFormat::p2 ? 4 : 1));
    for (std::size_t row = 0; row < h; ++row) {
        const std::size_t j = h - 1 - row;
        for (std::size_t i = 0; i < w; ++i) {
            const unsigned char v = shade(grid.at(j * w + i));
            if (format == PgmFormat::p5) {
                out.push_back(static_cast<char>(v));
            } else {
                if (i > 0) {
                    out.push_back(' ');
                }
                out += std::to_string(v);
            }
        }
        if (format == PgmFormat::p2) {
            out.push_back('\n');
        }
    }
    return out;
}

void render_raster(const evolute::OccupancyGrid& grid, const std::string& path, PgmFormat format)
{
    write_text_file(path, raster_bytes(grid, format));
}

std::string intervals_svg(std::span<const exact::OpenInterval> intervals, const exact::Rational& a,
                          const exact::Rational& b, const std::string& title)
{
    constexpr double W = 800, H = 120, pad = 20;
    const double lo = a.to_double();
    const double span = (b - a).to_double();
    auto px = [&](const exact::Rational& x) { return pad + (x.to_double() - lo) / span * (W - 2 * pad); };
    std::ostringstream os;
    os.precision(8);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << pad << "\" y=\"18\" font-family=\"monospace\" font-size=\"12\">" << title << "</text>\n";
    os << "<line x1=\"" << px(a) << "\" y1=\"70\" x2=\"" << px(b) << "\" y2=\"70\" stroke=\"black\"/>\n";
    for (const auto& iv : intervals) {
        const auto l = max(iv.lo, a);
        const auto r = min(iv.hi, b);
        if (!(l < r)) {
            continue;
        }
        os << "<rect x=\"" << px(l) << "\" y=\"55\" width=\"" << px(r) - px(l)
           << "\" height=\"30\" fill=\"firebrick\" fill-opacity=\"0.7\"/>\n";
    }
    os << "<text x=\"" << pad << "\" y=\"105\" font-family=\"monospace\" font-size=\"10\">" << a.str() << "</text>\n";
    os << "<text x=\"" << W - pad - 30 << "\" y=\"105\" font-family=\"monospace\" font-size=\"10\">" << b.str()
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace funnel::scenarios
