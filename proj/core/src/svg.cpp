#include "teamspectra/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "teamspectra/features.hpp"  // quantile

namespace teamspectra::report {

namespace {

constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 44;
constexpr int kMarginBottom = 48;

std::string escape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

void open_document(std::ostringstream& out, const std::string& title, int width,
                   int height) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << escape_text(title) << "</text>\n";
}

struct ValueAxis {
    double lo = 0.0;
    double hi = 1.0;
    double top = 0.0;
    double bottom = 0.0;

    double y(double v) const {
        return top + (hi - v) / (hi - lo) * (bottom - top);
    }
};

void draw_value_axis(std::ostringstream& out, const ValueAxis& axis,
                     double plot_left) {
    out << "<line x1=\"" << px(plot_left) << "\" y1=\"" << px(axis.top)
        << "\" x2=\"" << px(plot_left) << "\" y2=\"" << px(axis.bottom)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = axis.lo + (axis.hi - axis.lo) * i / 4.0;
        const double y = axis.y(v);
        out << "<line x1=\"" << px(plot_left - 4) << "\" y1=\"" << px(y)
            << "\" x2=\"" << px(plot_left) << "\" y2=\"" << px(y)
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << px(plot_left - 8) << "\" y=\"" << px(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"10\">"
            << short_number(v) << "</text>\n";
    }
}

}  // namespace

std::string bar_chart_svg(const std::string& title,
                          const std::vector<BarDatum>& data, int width,
                          int height) {
    std::ostringstream out;
    open_document(out, title, width, height);
    if (data.empty()) {
        out << "</svg>\n";
        return out.str();
    }

    ValueAxis axis;
    axis.lo = 0.0;
    axis.hi = 0.0;
    for (const BarDatum& d : data) {
        axis.lo = std::min(axis.lo, d.value);
        axis.hi = std::max(axis.hi, d.value);
    }
    if (axis.hi == axis.lo) axis.hi = axis.lo + 1.0;
    axis.top = kMarginTop;
    axis.bottom = height - kMarginBottom;

    const double plot_left = kMarginLeft;
    const double plot_width = width - kMarginLeft - kMarginRight;
    const double slot = plot_width / static_cast<double>(data.size());
    const double bar_width = slot * 0.7;
    const double baseline = axis.y(0.0);

    draw_value_axis(out, axis, plot_left);
    out << "<line x1=\"" << px(plot_left) << "\" y1=\"" << px(baseline)
        << "\" x2=\"" << px(plot_left + plot_width) << "\" y2=\""
        << px(baseline) << "\" stroke=\"black\"/>\n";

    for (std::size_t i = 0; i < data.size(); ++i) {
        const double center = plot_left + slot * (static_cast<double>(i) + 0.5);
        const double top = std::min(baseline, axis.y(data[i].value));
        const double bar_height = std::abs(baseline - axis.y(data[i].value));
        out << "<rect x=\"" << px(center - bar_width / 2) << "\" y=\"" << px(top)
            << "\" width=\"" << px(bar_width) << "\" height=\"" << px(bar_height)
            << "\" fill=\"#4878a8\"/>\n"
            << "<text x=\"" << px(center) << "\" y=\""
            << px(axis.bottom + 16) << "\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"10\">"
            << escape_text(data[i].label) << "</text>\n"
            << "<text x=\"" << px(center) << "\" y=\""
            << px((data[i].value >= 0 ? top : top + bar_height + 12) - 4)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"10\">"
            << short_number(data[i].value) << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

std::string violin_svg(const std::string& title,
                       const std::vector<ViolinDatum>& data, int width,
                       int height) {
    std::ostringstream out;
    open_document(out, title, width, height);

    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (const ViolinDatum& d : data) {
        for (const double v : d.values) {
            lo = any ? std::min(lo, v) : v;
            hi = any ? std::max(hi, v) : v;
            any = true;
        }
    }
    if (!any) {
        out << "</svg>\n";
        return out.str();
    }
    const double pad = (hi - lo) > 0.0 ? 0.08 * (hi - lo) : 1.0;

    ValueAxis axis;
    axis.lo = lo - pad;
    axis.hi = hi + pad;
    axis.top = kMarginTop;
    axis.bottom = height - kMarginBottom;

    const double plot_left = kMarginLeft;
    const double plot_width = width - kMarginLeft - kMarginRight;
    const double slot = plot_width / static_cast<double>(data.size());

    draw_value_axis(out, axis, plot_left);

    for (std::size_t g = 0; g < data.size(); ++g) {
        const std::vector<double>& v = data[g].values;
        const double center = plot_left + slot * (static_cast<double>(g) + 0.5);
        out << "<text x=\"" << px(center) << "\" y=\"" << px(axis.bottom + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"10\">"
            << escape_text(data[g].label) << "</text>\n";
        if (v.empty()) continue;

        const double n = static_cast<double>(v.size());
        const double mean =
            std::accumulate(v.begin(), v.end(), 0.0) / n;
        double var = 0.0;
        for (const double x : v) var += (x - mean) * (x - mean);
        var /= n;
        const double sd = std::sqrt(var);
        const double vmin = *std::min_element(v.begin(), v.end());
        const double vmax = *std::max_element(v.begin(), v.end());
        const double median = analytics::quantile(v, 0.5);

        if (sd == 0.0 || v.size() < 2) {
            // all mass at one value: a tick says it all
            const double y = axis.y(v.front());
            out << "<line x1=\"" << px(center - slot * 0.2) << "\" y1=\""
                << px(y) << "\" x2=\"" << px(center + slot * 0.2) << "\" y2=\""
                << px(y) << "\" stroke=\"#4878a8\" stroke-width=\"2\"/>\n";
            continue;
        }

        const double iqr =
            analytics::quantile(v, 0.75) - analytics::quantile(v, 0.25);
        double bandwidth = 0.9 * sd * std::pow(n, -0.2);
        if (iqr > 0.0)
            bandwidth = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);

        constexpr int kGrid = 41;
        const double grid_lo = std::max(axis.lo, vmin - 3.0 * bandwidth);
        const double grid_hi = std::min(axis.hi, vmax + 3.0 * bandwidth);
        std::vector<double> density(kGrid, 0.0);
        double max_density = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            const double t =
                grid_lo + (grid_hi - grid_lo) * i / double(kGrid - 1);
            double d = 0.0;
            for (const double x : v) {
                const double z = (t - x) / bandwidth;
                d += std::exp(-0.5 * z * z);
            }
            density[i] = d;
            max_density = std::max(max_density, d);
        }

        const double half_max = slot * 0.42;
        out << "<polygon points=\"";
        for (int i = 0; i < kGrid; ++i) {
            const double t =
                grid_lo + (grid_hi - grid_lo) * i / double(kGrid - 1);
            const double w = half_max * density[i] / max_density;
            out << px(center - w) << "," << px(axis.y(t)) << " ";
        }
        for (int i = kGrid - 1; i >= 0; --i) {
            const double t =
                grid_lo + (grid_hi - grid_lo) * i / double(kGrid - 1);
            const double w = half_max * density[i] / max_density;
            out << px(center + w) << "," << px(axis.y(t)) << " ";
        }
        out << "\" fill=\"#9ec3e6\" stroke=\"#4878a8\"/>\n";
        out << "<line x1=\"" << px(center - half_max * 0.6) << "\" y1=\""
            << px(axis.y(median)) << "\" x2=\"" << px(center + half_max * 0.6)
            << "\" y2=\"" << px(axis.y(median))
            << "\" stroke=\"#1f3a5f\" stroke-width=\"2\"/>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace teamspectra::report
