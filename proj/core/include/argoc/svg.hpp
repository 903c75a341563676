#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "argoc/nowcast.hpp"
#include "argoc/week.hpp"

namespace argoc {

struct SvgSeries {
    std::string name;
    std::vector<WeekStamp> weeks;
    std::vector<double> values;
};

/// Static line chart of dated series (truth vs predictions).
std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series);

/// Static heatmap of a week-by-predictor inclusion matrix; group bands get
/// alternating header shading.
std::string svg_inclusion_heatmap(const std::string& title, const TraceplotMatrix& trace);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace argoc
