#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rwa {

// Minimal SVG renderings for the benchmark reports; every figure is backed
// by a CSV, these are just quick-look plots.

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

void svg_line_chart(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y = false);

void svg_scatter(const std::filesystem::path& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<SvgSeries>& groups);

void svg_heatmap(const std::filesystem::path& path, const std::string& title,
                 const std::vector<std::vector<double>>& cells,
                 const std::vector<std::string>& row_labels,
                 const std::vector<std::string>& col_labels);

void svg_histogram(const std::filesystem::path& path, const std::string& title,
                   const std::string& x_label, const std::vector<double>& bin_edges,
                   const std::vector<double>& counts);

}  // namespace rwa
