#include "funnel/scenarios/registry.hpp"

namespace funnel::scenarios {

namespace {

const char* const kCommon = R"({
  "tolerance": {"flow": 1e-10},
  "output": {"rasters": true, "pgm": "P2", "svg": true}
})";

Json with_common(const char* text)
{
    Json j = Json::parse(kCommon);
    j.merge_patch(Json::parse(text));
    return j;
}

std::vector<ScenarioInfo> build()
{
    std::vector<ScenarioInfo> r;
    r.push_back({"square-translation", "unit square swept upward by v=(0,1); boundary band shrinks with h",
                 with_common(R"({
  "set": {"variant": "box", "lo": ["0", "0"], "hi": ["1", "1"], "topology": "closed"},
  "field": {"variant": "constant", "vector": ["0", "1"]},
  "t": "1",
  "mode": "closed",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1/2", "-1/2"], "hi": ["3/2", "5/2"]},
           "resolutions": ["1/32", "1/64", "1/128", "1/256"]},
  "checks": {"decay_ratio": "7/10"}
})")});
    r.push_back({"disk-rotation", "disk of radius 1/4 at (1/2,0) under a unit-speed rotation",
                 with_common(R"({
  "set": {"variant": "disk", "center": ["1/2", "0"], "radius": "1/4", "topology": "open"},
  "field": {"variant": "rotation", "omega": "1"},
  "t": "1",
  "mode": "closed",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1", "-1"], "hi": ["1", "1"]},
           "resolutions": ["1/32", "1/64", "1/128", "1/256"]},
  "checks": {"decay_ratio": "7/10"}
})")});
    r.push_back({"ex-plane", "dense union of shrinking balls on the x-axis; the swept boundary keeps positive area",
                 with_common(R"({
  "set": {"variant": "ex_plane", "N": 12},
  "field": {"variant": "constant", "vector": ["0", "1"]},
  "t": "1",
  "mode": "closed",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1/4", "-1/2"], "hi": ["5/4", "3/2"]},
           "resolutions": ["1/64", "1/128", "1/256"]},
  "witness": "2/3",
  "checks": {"boundary_floor": "1/2"}
})")});
    r.push_back({"ex-unbounded", "balls stacked down the y-axis, clipped to a window, at growing finite t",
                 with_common(R"({
  "set": {"variant": "ex_unbounded", "N": 12},
  "field": {"variant": "constant", "vector": ["0", "1"]},
  "times": ["1", "2", "4"],
  "mode": "closed",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1/4", "-4"], "hi": ["5/4", "2"]},
           "resolutions": ["1/32", "1/64"]}
})")});
    r.push_back({"radial-disk", "small disk pushed outward by the radial field g(|q|)q at finite horizons",
                 with_common(R"({
  "set": {"variant": "disk", "center": ["0", "0"], "radius": "1/10", "topology": "open"},
  "field": {"variant": "radial"},
  "times": ["1/2", "1", "3/2"],
  "mode": "closed",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1", "-1"], "hi": ["1", "1"]}, "resolutions": ["1/64"]},
  "tolerance": {"flow": 1e-9}
})")});
    r.push_back({"open-interval", "square translation with tau restricted to (0,t) against [0,t]",
                 with_common(R"({
  "set": {"variant": "box", "lo": ["0", "0"], "hi": ["1", "1"], "topology": "closed"},
  "field": {"variant": "constant", "vector": ["0", "1"]},
  "t": "1",
  "dtau": "auto",
  "grid": {"box": {"lo": ["-1/2", "-1/2"], "hi": ["3/2", "5/2"]}, "resolutions": ["1/64", "1/128"]}
})")});
    r.push_back({"prop-invariance", "Lebesgue-point classification before and after a flow map",
                 with_common(R"({
  "theta": "0.95",
  "eta": "0.02",
  "min_points": 20,
  "groups": [
    {"name": "half-space",
     "set": {"variant": "half_space", "normal": ["0", "1"], "offset": "0"},
     "field": {"variant": "rotation", "omega": "1"},
     "t": "1",
     "points": [["0", "0"], ["1/4", "0"], ["-1/2", "0"], ["0", "-1/2"], ["0", "1/2"], ["1/3", "-1/3"]],
     "radii": ["1/8", "1/16", "1/32"],
     "depth": 9},
    {"name": "square",
     "set": {"variant": "box", "lo": ["0", "0"], "hi": ["1", "1"], "topology": "closed"},
     "field": {"variant": "linear", "matrix": [["1", "0"], ["0", "1"]]},
     "t": "1/2",
     "points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"], ["1/2", "0"], ["1/2", "1/2"], ["3/2", "1/2"]],
     "radii": ["1/8", "1/16", "1/32"],
     "depth": 9},
    {"name": "ex-plane",
     "set": {"variant": "ex_plane", "N": 16},
     "field": {"variant": "constant", "vector": ["0", "1"]},
     "t": "3/10",
     "points": [["2/3", "0"], ["1/3", "0"], ["2/5", "0"], ["5/7", "0"], ["1/2", "0"], ["1/2", "1/2"],
                ["0", "-1/2"]],
     "radii": ["1/256", "1/512", "1/1024"],
     "depth": 12,
     "certify_x_axis": true}
  ]
})")});
    r.push_back({"lemma-inclusion", "boundary of the sweep stays within the sweep of the boundary band",
                 with_common(R"({
  "mode": "closed",
  "dtau": "auto",
  "cases": [
    {"name": "square-translation",
     "set": {"variant": "box", "lo": ["0", "0"], "hi": ["1", "1"], "topology": "closed"},
     "field": {"variant": "constant", "vector": ["0", "1"]},
     "t": "1",
     "box": {"lo": ["-1/2", "-1/2"], "hi": ["3/2", "5/2"]},
     "h": "1/64"},
    {"name": "disk-rotation",
     "set": {"variant": "disk", "center": ["1/2", "0"], "radius": "1/4", "topology": "open"},
     "field": {"variant": "rotation", "omega": "1"},
     "t": "1",
     "box": {"lo": ["-1", "-1"], "hi": ["1", "1"]},
     "h": "1/64"},
    {"name": "ex-plane",
     "set": {"variant": "ex_plane", "N": 8},
     "field": {"variant": "constant", "vector": ["0", "1"]},
     "t": "1",
     "box": {"lo": ["-1/4", "-1/2"], "hi": ["5/4", "3/2"]},
     "h": "1/64"}
  ]
})")});
    r.push_back({"flow-properties", "Gronwall expansion, closed-form accuracy and inverse consistency of flows",
                 with_common(R"({
  "seed": 20240917,
  "pairs": 1000,
  "points": 100,
  "times": ["1/2", "1"],
  "sample_box": {"lo": ["-1", "-1"], "hi": ["1", "1"]},
  "accuracy": 1e-8,
  "gronwall_slack": 1e-6,
  "inverse_factor": 2,
  "fields": [
    {"variant": "constant", "vector": ["1", "-1/2"]},
    {"variant": "linear", "matrix": [["-1/2", "1"], ["-1", "-1/2"]]},
    {"variant": "linear", "matrix": [["1", "0"], ["0", "1"]]},
    {"variant": "rotation", "omega": "1"},
    {"variant": "radial"}
  ]
})")});
    r.push_back({"density-profile", "complement density at a flat boundary point and at a point of K",
                 with_common(R"({
  "half_space": {"set": {"variant": "half_space", "normal": ["0", "1"], "offset": "0"},
                 "point": ["0", "0"], "radius": "1", "depths": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]},
  "witness": {"set": {"variant": "ex_plane", "N": 16}, "point": ["2/3", "0"],
              "radii": ["1/256", "1/512", "1/1024"], "depth": 12, "min_ratio": "99/100"},
  "theta": "0.95",
  "eta": "0.02"
})")});
    r.push_back({"cantor-measure", "exact measure enclosures of the residual set K",
                 with_common(R"({
  "levels": [1, 8, 64],
  "floor": "1/2",
  "expect": [{"n": 8, "lower": "405/512", "upper": "203/256"}],
  "width_bounds": [{"n": 64, "max_width_log2": -65, "min_lower": "78/100"}],
  "points": ["2/3", "1/3", "1/2", "2/5"],
  "certify_n": 8,
  "picture_n": 8
})")});
    return r;
}

}  // namespace

const std::vector<ScenarioInfo>& registry()
{
    static const std::vector<ScenarioInfo> r = build();
    return r;
}

const ScenarioInfo& find_scenario(const std::string& id)
{
    for (const auto& s : registry()) {
        if (s.id == id) {
            return s;
        }
    }
    std::string ids;
    for (const auto& s : registry()) {
        ids += (ids.empty() ? "" : ", ") + s.id;
    }
    throw ConfigError("unknown scenario '" + id + "'; registered: " + ids);
}

}  // namespace funnel::scenarios
