#include "homsim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homsim/errors.hpp"

namespace homsim::svgplot {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMargin = 60;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
    double lo, hi;
    double map(double v, double out_lo, double out_hi) const {
        if (hi == lo) return 0.5 * (out_lo + out_hi);
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

Range span_of(const std::vector<double>& v) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    double lo = *mn, hi = *mx;
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    return {lo, hi};
}

void axes(std::ostream& out, const std::string& title, const std::string& x_label,
          const std::string& y_label, const Range& xr, const Range& yr) {
    out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << kWidth - 2 * kMargin
        << "' height='" << kHeight - 2 * kMargin << "' fill='none' stroke='black'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
        << "' text-anchor='middle' font-size='12'>" << x_label << "</text>\n";
    out << "<text x='16' y='" << kHeight / 2 << "' text-anchor='middle' font-size='12' "
        << "transform='rotate(-90 16 " << kHeight / 2 << ")'>" << y_label << "</text>\n";
    std::ostringstream lo_x, hi_x, lo_y, hi_y;
    lo_x.precision(4);
    hi_x.precision(4);
    lo_y.precision(4);
    hi_y.precision(4);
    lo_x << xr.lo;
    hi_x << xr.hi;
    lo_y << yr.lo;
    hi_y << yr.hi;
    out << "<text x='" << kMargin << "' y='" << kHeight - kMargin + 16 << "' font-size='10'>"
        << lo_x.str() << "</text>\n";
    out << "<text x='" << kWidth - kMargin << "' y='" << kHeight - kMargin + 16
        << "' text-anchor='end' font-size='10'>" << hi_x.str() << "</text>\n";
    out << "<text x='" << kMargin - 4 << "' y='" << kHeight - kMargin
        << "' text-anchor='end' font-size='10'>" << lo_y.str() << "</text>\n";
    out << "<text x='" << kMargin - 4 << "' y='" << kMargin + 10
        << "' text-anchor='end' font-size='10'>" << hi_y.str() << "</text>\n";
}

}  // namespace

void write_line_plot(const std::string& path, const std::vector<double>& x,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
    if (x.empty() || series.empty()) throw std::domain_error("empty plot data");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");

    const Range xr = span_of(x);
    Range yr{1e300, -1e300};
    for (const auto& s : series) {
        const Range r = span_of(s);
        yr.lo = std::min(yr.lo, r.lo);
        yr.hi = std::max(yr.hi, r.hi);
    }

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    axes(out, title, x_label, y_label, xr, yr);
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill='none' stroke='" << kSeriesColors[s % 6]
            << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < x.size() && i < series[s].size(); ++i) {
            const double px = xr.map(x[i], kMargin, kWidth - kMargin);
            const double py = yr.map(series[s][i], kHeight - kMargin, kMargin);
            out << px << ',' << py << ' ';
        }
        out << "'/>\n";
        if (s < labels.size())
            out << "<text x='" << kWidth - kMargin - 4 << "' y='" << kMargin + 16 + 14 * s
                << "' text-anchor='end' font-size='11' fill='" << kSeriesColors[s % 6] << "'>"
                << labels[s] << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed for " + path);
}

void write_heatmap(const std::string& path, const std::vector<double>& x_axis,
                   const std::vector<double>& y_axis, const std::vector<double>& values,
                   const std::string& title) {
    const std::size_t nx = x_axis.size(), ny = y_axis.size();
    if (nx == 0 || ny == 0 || values.size() != nx * ny)
        throw std::domain_error("heatmap dimensions do not match the value array");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");

    const double vmax = *std::max_element(values.begin(), values.end());
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    const double cw = plot_w / static_cast<double>(ny);
    const double ch = plot_h / static_cast<double>(nx);

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = vmax > 0 ? values[i * ny + j] / vmax : 0.0;
            const int r = static_cast<int>(255 * std::min(1.0, 3.0 * v));
            const int g = static_cast<int>(255 * std::clamp(3.0 * v - 1.0, 0.0, 1.0));
            const int b = static_cast<int>(255 * std::clamp(3.0 * v - 2.0, 0.0, 1.0));
            if (v <= 0.0) continue;  // leave background white
            out << "<rect x='" << kMargin + j * cw << "' y='"
                << kHeight - kMargin - (i + 1) * ch << "' width='" << cw + 0.5 << "' height='"
                << ch + 0.5 << "' fill='rgb(" << r << ',' << g << ',' << b << ")'/>\n";
        }
    }
    out << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << plot_w << "' height='"
        << plot_h << "' fill='none' stroke='black'/>\n";
    out << "</svg>\n";
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace homsim::svgplot
