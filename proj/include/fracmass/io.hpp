#pragma once

#include <map>
#include <string>
#include <vector>

#include "fracmass/geometry.hpp"
#include "fracmass/perimeter.hpp"

namespace fracmass {

// Curve file: {"dim": d, "curves": [{"closed", "weight", "vertices"}]}
std::vector<PolyCurve> load_curves(const std::string& path);
void save_curves(const std::vector<PolyCurve>& curves, int dim,
                 const std::string& path);

// Current file: {"dim": d, "segments": [{"a", "b", "w"}]}
SegmentCurrent load_current(const std::string& path);
void save_current(const SegmentCurrent& mu, const std::string& path);

// Region file: {"dim": 2, "outer": {...curve...}, "holes": [...]}
PlanarRegion load_region(const std::string& path);
void save_region(const PlanarRegion& region, const std::string& path);

// Plain "key = value" config, '#' comments, whitespace-tolerant.
std::map<std::string, std::string> load_config(const std::string& path);

// Shortest decimal form that round-trips a double (17 significant
// digits at most); used everywhere numbers are serialized.
std::string format_double(double x);

}  // namespace fracmass
