#pragma once

#include <string>
#include <vector>

namespace teamspectra::report {

struct BarDatum {
    std::string label;
    double value = 0.0;
};

// Vertical bar chart as a standalone SVG document. The value axis always
// includes zero, so negative bars hang below the baseline.
std::string bar_chart_svg(const std::string& title,
                          const std::vector<BarDatum>& data, int width = 640,
                          int height = 400);

struct ViolinDatum {
    std::string label;
    std::vector<double> values;
};

// One mirrored kernel-density polygon per group (Gaussian kernel, Silverman
// bandwidth) with a tick at the group median. Groups whose values are all
// equal degenerate to the tick alone.
std::string violin_svg(const std::string& title,
                       const std::vector<ViolinDatum>& data, int width = 640,
                       int height = 400);

}  // namespace teamspectra::report
