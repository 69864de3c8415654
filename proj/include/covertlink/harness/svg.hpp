#pragma once

#include <string>
#include <vector>

namespace covertlink::sim {

/// Minimal deterministic SVG line plots for the experiment outputs.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    double log_floor = 1e-7;  // y values at/below 0 clamp here on log plots
    int width = 720;
    int height = 480;
};

std::string render_svg(const std::vector<SvgSeries>& series, const SvgOptions& opts);
void write_svg(const std::string& path, const std::vector<SvgSeries>& series,
               const SvgOptions& opts);

}  // namespace covertlink::sim
