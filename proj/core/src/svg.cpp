#include "argoc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace argoc {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#7f7f7f", "#17becf"};

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

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series) {
    const double W = 960, H = 420;
    const double left = 60, right = 20, top = 40, bottom = 40;

    long wk_min = std::numeric_limits<long>::max(), wk_max = std::numeric_limits<long>::min();
    double v_min = std::numeric_limits<double>::infinity(), v_max = -v_min;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.weeks.size(); ++i) {
            wk_min = std::min(wk_min, week_index(s.weeks[i]));
            wk_max = std::max(wk_max, week_index(s.weeks[i]));
            v_min = std::min(v_min, s.values[i]);
            v_max = std::max(v_max, s.values[i]);
        }
    }
    if (wk_min > wk_max) {
        wk_min = wk_max = 0;
        v_min = 0;
        v_max = 1;
    }
    if (v_max <= v_min) v_max = v_min + 1;
    const double pad = 0.05 * (v_max - v_min);
    v_min -= pad;
    v_max += pad;

    const auto x_of = [&](WeekStamp w) {
        const double f = wk_max == wk_min
                             ? 0.5
                             : static_cast<double>(week_index(w) - wk_min) /
                                   static_cast<double>(wk_max - wk_min);
        return left + f * (W - left - right);
    };
    const auto y_of = [&](double v) {
        return top + (1.0 - (v - v_min) / (v_max - v_min)) * (H - top - bottom);
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">"
        << esc(title) << "</text>\n";

    out << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right
        << "\" y2=\"" << H - bottom << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << H - bottom << "\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = v_min + (v_max - v_min) * i / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << num(v)
            << "</text>\n";
    }
    WeekStamp first{}, last{};
    for (const auto& s : series)
        if (!s.weeks.empty()) {
            first = s.weeks.front();
            last = s.weeks.back();
            break;
        }
    for (const auto& s : series) {
        if (s.weeks.empty()) continue;
        if (week_index(s.weeks.front()) < week_index(first)) first = s.weeks.front();
        if (week_index(s.weeks.back()) > week_index(last)) last = s.weeks.back();
    }
    out << "<text x=\"" << left << "\" y=\"" << H - bottom + 16
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << format_week(first) << "</text>\n";
    out << "<text x=\"" << W - right << "\" y=\"" << H - bottom + 16
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_week(last) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.weeks.empty()) continue;
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\" points=\"";
        for (std::size_t i = 0; i < s.weeks.size(); ++i) {
            if (i) out << ' ';
            out << num(x_of(s.weeks[i])) << ',' << num(y_of(s.values[i]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << left + 10 << "\" y=\"" << top + 14.0 * (si + 1)
            << "\" font-size=\"12\" font-family=\"sans-serif\" fill=\"" << color << "\">"
            << esc(s.name) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_inclusion_heatmap(const std::string& title, const TraceplotMatrix& trace) {
    const std::size_t rows = trace.weeks.size();
    const std::size_t cols = trace.columns.size();
    const double cell = 6.0;
    const double left = 70, top = 60;
    const double W = left + cols * cell + 20;
    const double H = top + rows * cell + 20;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\" "
           "font-family=\"sans-serif\">"
        << esc(title) << "</text>\n";

    // Group bands along the header.
    for (std::size_t c = 0; c < cols; ++c) {
        const int g = trace.column_group[c];
        const char* band = g == 0 ? "#dddddd" : (g % 2 ? "#c6dbef" : "#fdd0a2");
        out << "<rect x=\"" << left + c * cell << "\" y=\"" << top - 10 << "\" width=\"" << cell
            << "\" height=\"8\" fill=\"" << band << "\"/>\n";
    }

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const char* fill = trace.included[r][c] ? "#08519c" : "#f0f0f0";
            out << "<rect x=\"" << left + c * cell << "\" y=\"" << top + r * cell << "\" width=\""
                << cell - 0.5 << "\" height=\"" << cell - 0.5 << "\" fill=\"" << fill << "\"/>\n";
        }
        if (r == 0 || r + 1 == rows || r % 26 == 0) {
            out << "<text x=\"" << left - 4 << "\" y=\"" << top + r * cell + cell
                << "\" text-anchor=\"end\" font-size=\"9\" font-family=\"sans-serif\">"
                << format_week(trace.weeks[r]) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot create file");
    out << content;
}

}  // namespace argoc
