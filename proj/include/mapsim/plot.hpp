#pragma once

#include <string>
#include <vector>

namespace mapsim {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal static SVG charts; enough for convergence curves and per-bucket
// bars without an external plotting dependency.
void svg_line_chart(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series,
                    const std::vector<double>& event_marks = {});

struct BarGroup {
    std::string label;                 // x-axis bucket, e.g. "M_s=4"
    std::vector<double> values;        // one per series
};

void svg_bar_chart(const std::string& path, const std::string& title,
                   const std::string& y_label, const std::vector<std::string>& series_labels,
                   const std::vector<BarGroup>& groups);

}  // namespace mapsim
