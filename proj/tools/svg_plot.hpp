#pragma once

#include <string>
#include <vector>

namespace agripv::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG 1.1 line chart with axes, numeric ticks and a legend.
/// Non-finite points are skipped. Output bytes depend only on the input.
/// Throws std::invalid_argument when no series holds a finite point.
std::string render_svg(const PlotSpec& spec);

/// Round tick values covering [lo, hi], about `target` of them.
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

}  // namespace agripv::cli
