#pragma once

#include <span>
#include <string>
#include <vector>

#include "nql/vec4.hpp"

namespace nql::cli {

struct ScatterPoint {
    double x = 0.0;
    double y = 0.0;
    std::string label;
};

struct PlotSpec {
    std::vector<ScatterPoint> points;
    std::vector<std::pair<double, double>> curve;
    std::string x_label;
    std::string y_label;
};

/// Standalone SVG, viewBox 800x600 with 5% margins: one <circle> per point,
/// one red <polyline> for the curve.
std::string render_svg(const PlotSpec& spec);

}  // namespace nql::cli
