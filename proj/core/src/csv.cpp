#include "argoc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace argoc {

namespace fs = std::filesystem;

std::string format_number(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

namespace {

[[noreturn]] void schema_fail(const fs::path& path, std::size_t line, const std::string& what) {
    throw SchemaError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

double parse_cell(const fs::path& path, std::size_t line_no, const std::string& cell,
                  bool allow_missing) {
    if (cell.empty()) {
        if (allow_missing) return std::numeric_limits<double>::quiet_NaN();
        schema_fail(path, line_no, "empty numeric cell");
    }
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        schema_fail(path, line_no, "not a number: '" + cell + "'");
    return v;
}

std::ifstream open_or_fail(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string() + ": cannot open file");
    return in;
}

std::ofstream create_or_fail(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot create file");
    return out;
}

}  // namespace

WideTable read_wide_csv(const fs::path& path, bool allow_missing) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    ++line_no;
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date")
        schema_fail(path, 1, "header must be date,<name_1>,...");

    WideTable table;
    table.names.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            schema_fail(path, line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                           std::to_string(fields.size()));
        WeekStamp w;
        try {
            w = parse_week(fields[0]);
        } catch (const std::invalid_argument& e) {
            schema_fail(path, line_no, e.what());
        }
        table.weeks.push_back(w);
        std::vector<double> row(header.size() - 1);
        for (std::size_t j = 1; j < fields.size(); ++j)
            row[j - 1] = parse_cell(path, line_no, fields[j], allow_missing);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) schema_fail(path, line_no, "no data rows");
    for (std::size_t i = 1; i < table.weeks.size(); ++i)
        if (!(table.weeks[i - 1] < table.weeks[i]))
            schema_fail(path, i + 2, "dates must be strictly increasing");

    table.values.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(header.size() - 1));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return table;
}

void write_wide_csv(const fs::path& path, const WideTable& table) {
    std::ofstream out = create_or_fail(path);
    out << "date";
    for (const auto& n : table.names) out << ',' << csv_escape(n);
    out << '\n';
    for (std::size_t i = 0; i < table.weeks.size(); ++i) {
        out << format_week(table.weeks[i]);
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
            out << ',';
            const double v = table.values(static_cast<Eigen::Index>(i), j);
            if (std::isfinite(v)) out << format_number(v);
        }
        out << '\n';
    }
}

WideTable read_target_csv(const fs::path& path) { return read_wide_csv(path, true); }

WideTable read_predictor_csv(const fs::path& path) { return read_wide_csv(path, false); }

AvailabilityTable read_availability_csv(const fs::path& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "term" || header[1] != "first_usable_date")
        schema_fail(path, 1, "header must be term,first_usable_date");
    AvailabilityTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) schema_fail(path, line_no, "expected 2 fields");
        table.terms.push_back(fields[0]);
        try {
            table.first_usable.push_back(parse_week(fields[1]));
        } catch (const std::invalid_argument& e) {
            schema_fail(path, line_no, e.what());
        }
    }
    return table;
}

TermPartition read_partition_csv(const fs::path& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "term" || header[1] != "group_id")
        schema_fail(path, 1, "header must be term,group_id");
    TermPartition part;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) schema_fail(path, line_no, "expected 2 fields");
        const double g = parse_cell(path, line_no, fields[1], false);
        if (g < 1 || g != std::floor(g)) schema_fail(path, line_no, "group_id must be a positive integer");
        part.terms.push_back(fields[0]);
        part.group_ids.push_back(static_cast<int>(g));
    }
    if (part.terms.empty()) schema_fail(path, line_no, "no partition rows");
    return part;
}

void write_partition_csv(const fs::path& path, const TermPartition& partition) {
    std::ofstream out = create_or_fail(path);
    out << "term,group_id\n";
    for (std::size_t i = 0; i < partition.terms.size(); ++i)
        out << csv_escape(partition.terms[i]) << ',' << partition.group_ids[i] << '\n';
}

void write_dendrogram_jsonl(const fs::path& path, const Dendrogram& tree) {
    std::ofstream out = create_or_fail(path);
    const auto list = [](const std::vector<int>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(v[i]);
        }
        return s + "]";
    };
    for (const auto& m : tree.merges)
        out << "{\"left\":" << list(m.left) << ",\"right\":" << list(m.right)
            << ",\"height\":" << format_number(m.height) << "}\n";
}

void write_scan_csv(const fs::path& path, const std::vector<ClusterScanRow>& rows) {
    std::ofstream out = create_or_fail(path);
    out << "K,within_group_variance,silhouette\n";
    for (const auto& r : rows) {
        out << r.K << ',' << format_number(r.within_var) << ',';
        if (std::isfinite(r.silhouette)) out << format_number(r.silhouette);
        out << '\n';
    }
}

WeeklyPanel assemble_panel(const WideTable& target, const WideTable& predictors) {
    if (target.names.size() != 1)
        throw SchemaError("target table must carry exactly one series");
    WeeklyPanel panel;
    const WeekStamp begin = std::max(target.weeks.front(), predictors.weeks.front());
    const WeekStamp end = predictors.weeks.back();
    if (end < begin) throw SchemaError("target and predictor date ranges do not overlap");

    for (WeekStamp w = begin; !(end < w); w = next_week(w)) panel.weeks.push_back(w);
    const Eigen::Index n = static_cast<Eigen::Index>(panel.weeks.size());
    panel.terms = predictors.names;
    panel.target.setConstant(n, std::numeric_limits<double>::quiet_NaN());
    panel.predictors.resize(n, predictors.values.cols());

    std::map<WeekStamp, Eigen::Index> target_row, pred_row;
    for (std::size_t i = 0; i < target.weeks.size(); ++i)
        target_row[target.weeks[i]] = static_cast<Eigen::Index>(i);
    for (std::size_t i = 0; i < predictors.weeks.size(); ++i)
        pred_row[predictors.weeks[i]] = static_cast<Eigen::Index>(i);

    for (Eigen::Index i = 0; i < n; ++i) {
        const WeekStamp w = panel.weeks[i];
        auto pt = pred_row.find(w);
        if (pt == pred_row.end())
            throw SchemaError("predictor table misses week " + format_week(w));
        panel.predictors.row(i) = predictors.values.row(pt->second);
        auto tt = target_row.find(w);
        if (tt != target_row.end()) panel.target[i] = target.values(tt->second, 0);
    }
    validate_panel(panel);
    return panel;
}

void write_run_csv(const fs::path& path, const NowcastRun& run,
                   const std::vector<WeekStamp>& truth_weeks,
                   const std::vector<double>& truth_pct) {
    std::map<WeekStamp, double> truth;
    for (std::size_t i = 0; i < truth_weeks.size(); ++i) truth[truth_weeks[i]] = truth_pct[i];
    std::ofstream out = create_or_fail(path);
    out << "date,prediction,truth,lambda,method\n";
    for (const auto& rec : run.weeks) {
        out << format_week(rec.week) << ',' << format_number(rec.prediction_pct) << ',';
        auto it = truth.find(rec.week);
        if (it != truth.end() && std::isfinite(it->second)) out << format_number(it->second);
        out << ',' << format_number(rec.lambda) << ',' << csv_escape(run.method) << '\n';
    }
}

PredictionSeries read_run_csv(const fs::path& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date" || header[1] != "prediction")
        schema_fail(path, 1, "header must start with date,prediction");
    PredictionSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) schema_fail(path, line_no, "field count mismatch");
        try {
            series.weeks.push_back(parse_week(fields[0]));
        } catch (const std::invalid_argument& e) {
            schema_fail(path, line_no, e.what());
        }
        series.values_pct.push_back(parse_cell(path, line_no, fields[1], false));
        if (header.size() >= 5 && series.method.empty()) series.method = fields[4];
    }
    if (series.weeks.empty()) schema_fail(path, line_no, "no prediction rows");
    return series;
}

PredictionSeries read_external_prediction_csv(const fs::path& path, const std::string& method) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "date" || header[1] != "prediction")
        schema_fail(path, 1, "header must be date,prediction");
    PredictionSeries series;
    series.method = method;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) schema_fail(path, line_no, "expected 2 fields");
        try {
            series.weeks.push_back(parse_week(fields[0]));
        } catch (const std::invalid_argument& e) {
            schema_fail(path, line_no, e.what());
        }
        series.values_pct.push_back(parse_cell(path, line_no, fields[1], false));
    }
    if (series.weeks.empty()) schema_fail(path, line_no, "no prediction rows");
    return series;
}

void write_traceplot_csv(const fs::path& path, const TraceplotMatrix& trace) {
    std::ofstream out = create_or_fail(path);
    out << "date";
    for (const auto& c : trace.columns) out << ',' << csv_escape(c);
    out << '\n';
    for (std::size_t i = 0; i < trace.weeks.size(); ++i) {
        out << format_week(trace.weeks[i]);
        for (auto b : trace.included[i]) out << ',' << int(b);
        out << '\n';
    }
}

TraceplotMatrix read_traceplot_csv(const fs::path& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) schema_fail(path, 1, "missing header");
    auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date")
        schema_fail(path, 1, "header must be date,<predictor_1>,...");
    TraceplotMatrix trace;
    trace.columns.assign(header.begin() + 1, header.end());
    trace.column_group.assign(trace.columns.size(), 0);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) schema_fail(path, line_no, "field count mismatch");
        try {
            trace.weeks.push_back(parse_week(fields[0]));
        } catch (const std::invalid_argument& e) {
            schema_fail(path, line_no, e.what());
        }
        std::vector<std::uint8_t> row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (fields[j] != "0" && fields[j] != "1")
                schema_fail(path, line_no, "inclusion cells must be 0 or 1");
            row.push_back(fields[j] == "1" ? 1 : 0);
        }
        trace.included.push_back(std::move(row));
    }
    return trace;
}

void write_interval_csv(const fs::path& path, const IntervalRun& run) {
    std::ofstream out = create_or_fail(path);
    out << "date,lower,prediction,upper,level\n";
    for (std::size_t i = 0; i < run.weeks.size(); ++i)
        out << format_week(run.weeks[i]) << ',' << format_number(run.lower[i]) << ','
            << format_number(run.prediction[i]) << ',' << format_number(run.upper[i]) << ','
            << format_number(run.level) << '\n';
}

void write_boost_csv(const fs::path& path, const std::vector<BoostRow>& rows) {
    std::ofstream out = create_or_fail(path);
    out << "date,region,raw,boosted,truth\n";
    for (const auto& r : rows)
        out << format_week(r.week) << ',' << csv_escape(r.region) << ','
            << format_number(r.raw_pct) << ',' << format_number(r.boosted_pct) << ','
            << format_number(r.truth_pct) << '\n';
}

void write_report_csv(const fs::path& path, const MetricReport& report) {
    std::ofstream out = create_or_fail(path);
    out << "metric,method";
    for (const auto& s : report.slices) out << ',' << csv_escape(s.name);
    out << '\n';
    const auto emit = [&](const char* metric, auto value_of, auto has_value) {
        for (std::size_t r = 0; r < report.methods.size(); ++r) {
            out << metric << ',' << csv_escape(report.methods[r]);
            for (std::size_t s = 0; s < report.slices.size(); ++s) {
                const MetricCell& c = report.cells[r][s];
                out << ',';
                if (has_value(c))
                    out << format_number(value_of(c));
                else
                    out << "--";
            }
            out << '\n';
        }
    };
    emit("rmse", [](const MetricCell& c) { return c.rmse; },
         [](const MetricCell& c) { return c.n_weeks > 0; });
    emit("mae", [](const MetricCell& c) { return c.mae; },
         [](const MetricCell& c) { return c.n_weeks > 0; });
    emit("correlation", [](const MetricCell& c) { return c.correlation; },
         [](const MetricCell& c) { return c.has_correlation; });

    fs::path best = path;
    best.replace_extension(".best.csv");
    std::ofstream bout = create_or_fail(best);
    bout << "metric,method";
    for (const auto& s : report.slices) bout << ',' << csv_escape(s.name);
    bout << '\n';
    const auto emit_best = [&](const char* metric, auto flag_of) {
        for (std::size_t r = 0; r < report.methods.size(); ++r) {
            bout << metric << ',' << csv_escape(report.methods[r]);
            for (std::size_t s = 0; s < report.slices.size(); ++s)
                bout << ',' << int(flag_of(report.cells[r][s]));
            bout << '\n';
        }
    };
    emit_best("rmse", [](const MetricCell& c) { return c.rmse_best; });
    emit_best("mae", [](const MetricCell& c) { return c.mae_best; });
    emit_best("correlation", [](const MetricCell& c) { return c.correlation_best; });
}

void write_model_csv(const fs::path& path, const SglModel& model,
                     const std::vector<std::string>& term_names) {
    if (static_cast<Eigen::Index>(term_names.size()) != model.exo_coef.size())
        throw std::invalid_argument("write_model_csv: term names do not match coefficients");
    std::ofstream out = create_or_fail(path);
    out << "name,value\n";
    out << "intercept," << format_number(model.intercept) << '\n';
    for (Eigen::Index s = 0; s < model.ar_coef.size(); ++s)
        out << "ar_" << (s + 1) << ',' << format_number(model.ar_coef[s]) << '\n';
    for (Eigen::Index j = 0; j < model.exo_coef.size(); ++j)
        out << csv_escape(term_names[j]) << ',' << format_number(model.exo_coef[j]) << '\n';
    out << "lambda," << format_number(model.penalty.lambda) << '\n';
    out << "alpha," << format_number(model.penalty.alpha) << '\n';
    out << "converged," << (model.converged ? 1 : 0) << '\n';
    out << "objective," << format_number(model.objective_value) << '\n';
}

}  // namespace argoc
