#include "mapsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mapsim {

namespace {

constexpr int kWidth = 860;
constexpr int kHeight = 500;
constexpr int kMarginL = 80, kMarginR = 30, kMarginT = 50, kMarginB = 60;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Scale {
    double min_v, max_v;
    double lo_px, hi_px;
    double operator()(double v) const {
        double span = max_v - min_v;
        if (span <= 0.0) span = 1.0;
        return lo_px + (v - min_v) / span * (hi_px - lo_px);
    }
};

std::string fmt_tick(double v) {
    std::ostringstream os;
    double a = std::abs(v);
    if (a >= 1e9) os << v / 1e9 << "G";
    else if (a >= 1e6) os << v / 1e6 << "M";
    else if (a >= 1e3) os << v / 1e3 << "k";
    else os << v;
    return os.str();
}

void chart_frame(std::ostream& os, const std::string& title, const std::string& x_label,
                 const std::string& y_label, const Scale& xs, const Scale& ys) {
    os << "<rect x='" << kMarginL << "' y='" << kMarginT << "' width='"
       << kWidth - kMarginL - kMarginR << "' height='" << kHeight - kMarginT - kMarginB
       << "' fill='none' stroke='#444'/>\n";
    os << "<text x='" << kWidth / 2 << "' y='28' text-anchor='middle' font-size='17'>"
       << esc(title) << "</text>\n";
    os << "<text x='" << kWidth / 2 << "' y='" << kHeight - 14
       << "' text-anchor='middle' font-size='13'>" << esc(x_label) << "</text>\n";
    os << "<text x='20' y='" << kHeight / 2
       << "' text-anchor='middle' font-size='13' transform='rotate(-90 20 " << kHeight / 2
       << ")'>" << esc(y_label) << "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        double fx = xs.min_v + (xs.max_v - xs.min_v) * i / 5.0;
        double fy = ys.min_v + (ys.max_v - ys.min_v) * i / 5.0;
        os << "<text x='" << xs(fx) << "' y='" << kHeight - kMarginB + 18
           << "' text-anchor='middle' font-size='11'>" << fmt_tick(fx) << "</text>\n";
        os << "<text x='" << kMarginL - 8 << "' y='" << ys(fy) + 4
           << "' text-anchor='end' font-size='11'>" << fmt_tick(fy) << "</text>\n";
        os << "<line x1='" << kMarginL << "' y1='" << ys(fy) << "' x2='"
           << kWidth - kMarginR << "' y2='" << ys(fy)
           << "' stroke='#ddd' stroke-width='0.5'/>\n";
    }
}

}  // namespace

void svg_line_chart(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series,
                    const std::vector<double>& event_marks) {
    if (series.empty()) throw std::invalid_argument("line chart needs at least one series");
    double min_x = std::numeric_limits<double>::max(), max_x = std::numeric_limits<double>::lowest();
    double min_y = min_x, max_y = max_x;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            any = true;
            min_x = std::min(min_x, s.x[i]);
            max_x = std::max(max_x, s.x[i]);
            min_y = std::min(min_y, s.y[i]);
            max_y = std::max(max_y, s.y[i]);
        }
    }
    if (!any) throw std::invalid_argument("line chart with empty series");
    if (min_y == max_y) {
        min_y -= 1.0;
        max_y += 1.0;
    }

    Scale xs{min_x, max_x, static_cast<double>(kMarginL), static_cast<double>(kWidth - kMarginR)};
    Scale ys{min_y, max_y, static_cast<double>(kHeight - kMarginB), static_cast<double>(kMarginT)};

    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write plot: " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
       << kHeight << "' font-family='sans-serif'>\n";
    chart_frame(os, title, x_label, y_label, xs, ys);

    for (double mark : event_marks)
        os << "<line x1='" << xs(mark) << "' y1='" << kMarginT << "' x2='" << xs(mark)
           << "' y2='" << kHeight - kMarginB
           << "' stroke='#bbb' stroke-dasharray='3,3'/>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % 7];
        if (s.x.size() == 1) {
            os << "<circle cx='" << xs(s.x[0]) << "' cy='" << ys(s.y[0])
               << "' r='3' fill='" << color << "'/>\n";
        } else {
            os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
            for (std::size_t p = 0; p < s.x.size(); ++p)
                os << xs(s.x[p]) << "," << ys(s.y[p]) << " ";
            os << "'/>\n";
        }
        os << "<text x='" << kWidth - kMarginR - 10 << "' y='" << kMarginT + 18 * (i + 1)
           << "' text-anchor='end' font-size='12' fill='" << color << "'>" << esc(s.label)
           << "</text>\n";
    }
    os << "</svg>\n";
}

void svg_bar_chart(const std::string& path, const std::string& title,
                   const std::string& y_label, const std::vector<std::string>& series_labels,
                   const std::vector<BarGroup>& groups) {
    if (groups.empty()) throw std::invalid_argument("bar chart with no groups");
    double max_y = 0.0;
    for (const auto& g : groups)
        for (double v : g.values) max_y = std::max(max_y, v);
    if (max_y <= 0.0) max_y = 1.0;

    Scale ys{0.0, max_y * 1.05, static_cast<double>(kHeight - kMarginB),
             static_cast<double>(kMarginT)};

    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write plot: " + path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
       << kHeight << "' font-family='sans-serif'>\n";
    Scale xs{0.0, 1.0, static_cast<double>(kMarginL), static_cast<double>(kWidth - kMarginR)};
    chart_frame(os, title, "", y_label, xs, ys);

    double plot_w = kWidth - kMarginL - kMarginR;
    double group_w = plot_w / static_cast<double>(groups.size());
    std::size_t n_series = series_labels.size();
    double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, n_series));

    for (std::size_t g = 0; g < groups.size(); ++g) {
        double gx = kMarginL + group_w * (static_cast<double>(g) + 0.1);
        for (std::size_t s = 0; s < groups[g].values.size() && s < n_series; ++s) {
            double v = groups[g].values[s];
            double top = ys(v);
            os << "<rect x='" << gx + bar_w * static_cast<double>(s) << "' y='" << top
               << "' width='" << bar_w * 0.92 << "' height='"
               << (kHeight - kMarginB) - top << "' fill='" << kPalette[s % 7] << "'/>\n";
        }
        os << "<text x='" << gx + group_w * 0.4 << "' y='" << kHeight - kMarginB + 18
           << "' text-anchor='middle' font-size='12'>" << esc(groups[g].label)
           << "</text>\n";
    }
    for (std::size_t s = 0; s < n_series; ++s)
        os << "<text x='" << kWidth - kMarginR - 10 << "' y='" << kMarginT + 18 * (s + 1)
           << "' text-anchor='end' font-size='12' fill='" << kPalette[s % 7] << "'>"
           << esc(series_labels[s]) << "</text>\n";
    os << "</svg>\n";
}

}  // namespace mapsim
