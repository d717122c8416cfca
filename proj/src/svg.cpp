#include "rwa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace rwa {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

struct Canvas {
    std::string body;
    Range xr, yr;

    double sx(double x) const { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight); }
    double sy(double y) const { return kHeight - kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom); }

    void text(double x, double y, const std::string& s, const std::string& attrs = "") {
        body += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"12\" " + attrs + ">" + s + "</text>\n";
    }

    void axes(const std::string& title, const std::string& xl, const std::string& yl) {
        body += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kWidth - kLeft - kRight) +
                "\" height=\"" + num(kHeight - kTop - kBottom) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        text(kWidth / 2 - 4.0 * title.size() / 2, 22, title, "font-size=\"14\"");
        text(kWidth / 2 - 3.0 * xl.size(), kHeight - 12, xl);
        text(12, kTop - 10, yl);
        for (int i = 0; i <= 4; ++i) {
            const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
            const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
            text(sx(fx) - 12, kHeight - kBottom + 16, num(fx), "fill=\"#333\" font-size=\"10\"");
            text(8, sy(fy) + 4, num(fy), "fill=\"#333\" font-size=\"10\"");
        }
    }
};

void write_svg(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body << "</svg>\n";
}

double log_or(double v, bool log_scale) {
    if (!log_scale) return v;
    return v > 0.0 ? std::log10(v) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void svg_line_chart(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y) {
    Canvas c;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            c.xr.add(s.x[i]);
            c.yr.add(log_or(s.y[i], log_y));
        }
    c.xr.pad();
    c.yr.pad();
    c.axes(title, x_label, log_y ? "log10 " + y_label : y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double y = log_or(s.y[i], log_y);
            if (std::isnan(y)) continue;
            pts += num(c.sx(s.x[i])) + "," + num(c.sy(y)) + " ";
        }
        c.body += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % 6]) +
                  "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        c.text(kLeft + 10, kTop + 16 + 14.0 * k, s.label, "fill=\"" + std::string(kPalette[k % 6]) + "\"");
    }
    write_svg(path, c.body);
}

void svg_scatter(const std::filesystem::path& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<SvgSeries>& groups) {
    Canvas c;
    for (const auto& g : groups)
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            c.xr.add(g.x[i]);
            c.yr.add(g.y[i]);
        }
    c.xr.pad();
    c.yr.pad();
    c.axes(title, x_label, y_label);
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const auto& g = groups[k];
        for (std::size_t i = 0; i < g.x.size(); ++i)
            c.body += "<circle cx=\"" + num(c.sx(g.x[i])) + "\" cy=\"" + num(c.sy(g.y[i])) +
                      "\" r=\"2.5\" fill=\"" + std::string(kPalette[k % 6]) + "\" fill-opacity=\"0.7\"/>\n";
        c.text(kLeft + 10, kTop + 16 + 14.0 * k, g.label, "fill=\"" + std::string(kPalette[k % 6]) + "\"");
    }
    write_svg(path, c.body);
}

void svg_heatmap(const std::filesystem::path& path, const std::string& title,
                 const std::vector<std::vector<double>>& cells,
                 const std::vector<std::string>& row_labels,
                 const std::vector<std::string>& col_labels) {
    const std::size_t n_rows = cells.size();
    const std::size_t n_cols = n_rows ? cells.front().size() : 0;
    Range r;
    for (const auto& row : cells)
        for (double v : row) r.add(v);
    r.pad();

    std::string body;
    body += "<text x=\"" + num(kWidth / 2 - 4.0 * title.size() / 2) + "\" y=\"22\" font-size=\"14\">" + title +
            "</text>\n";
    const double cw = (kWidth - kLeft - kRight) / static_cast<double>(n_cols);
    const double ch = (kHeight - kTop - kBottom) / static_cast<double>(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (std::size_t j = 0; j < n_cols; ++j) {
            const double t = (cells[i][j] - r.lo) / (r.hi - r.lo);
            const int red = static_cast<int>(255 * t);
            const int blue = static_cast<int>(255 * (1.0 - t));
            char color[16];
            std::snprintf(color, sizeof(color), "#%02x50%02x", red, blue);
            const double x = kLeft + cw * j, y = kTop + ch * i;
            body += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) + "\" height=\"" +
                    num(ch) + "\" fill=\"" + color + "\" stroke=\"#fff\"/>\n";
            body += "<text x=\"" + num(x + cw / 2 - 12) + "\" y=\"" + num(y + ch / 2 + 4) +
                    "\" font-size=\"11\" fill=\"#fff\">" + num(cells[i][j]) + "</text>\n";
        }
        body += "<text x=\"4\" y=\"" + num(kTop + ch * i + ch / 2 + 4) + "\" font-size=\"11\">" +
                (i < row_labels.size() ? row_labels[i] : "") + "</text>\n";
    }
    for (std::size_t j = 0; j < n_cols; ++j)
        body += "<text x=\"" + num(kLeft + cw * j + cw / 2 - 12) + "\" y=\"" + num(kHeight - kBottom + 16) +
                "\" font-size=\"11\">" + (j < col_labels.size() ? col_labels[j] : "") + "</text>\n";
    write_svg(path, body);
}

void svg_histogram(const std::filesystem::path& path, const std::string& title,
                   const std::string& x_label, const std::vector<double>& bin_edges,
                   const std::vector<double>& counts) {
    Canvas c;
    for (double e : bin_edges) c.xr.add(e);
    c.yr.add(0.0);
    for (double v : counts) c.yr.add(v);
    c.xr.pad();
    c.yr.pad();
    c.axes(title, x_label, "count");
    for (std::size_t i = 0; i + 1 < bin_edges.size() && i < counts.size(); ++i) {
        const double x0 = c.sx(bin_edges[i]), x1 = c.sx(bin_edges[i + 1]);
        const double y0 = c.sy(counts[i]), y1 = c.sy(0.0);
        c.body += "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
                  num(y1 - y0) + "\" fill=\"#1f77b4\" fill-opacity=\"0.8\" stroke=\"#fff\"/>\n";
    }
    write_svg(path, c.body);
}

}  // namespace rwa
