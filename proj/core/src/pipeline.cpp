#include "argoc/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "argoc/bootstrap.hpp"
#include "argoc/csv.hpp"
#include "argoc/metrics.hpp"
#include "argoc/svg.hpp"

namespace argoc {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct LoadedData {
    WeeklyPanel raw;
    WeeklyPanel transformed;
    AvailabilityTable availability;
    WideTable target_table;
};

LoadedData load_data(const RunConfig& config) {
    if (config.target_csv.empty() || config.predictor_csv.empty())
        throw std::invalid_argument("target and predictor CSV paths are required");
    LoadedData data;
    data.target_table = read_target_csv(config.target_csv);
    const WideTable predictors = read_predictor_csv(config.predictor_csv);

    WideTable first_target = data.target_table;
    if (first_target.names.size() > 1) {
        first_target.names.resize(1);
        first_target.values = data.target_table.values.col(0).eval();
    }
    data.raw = assemble_panel(first_target, predictors);
    data.transformed = transform_panel(data.raw, config.log_eps);
    if (!config.availability_csv.empty())
        data.availability = read_availability_csv(config.availability_csv);
    return data;
}

// Entries look like "path" or "path@YYYY-Www", separated by ';'.
PartitionSchedule load_partitions(const RunConfig& config, const WeeklyPanel& panel) {
    PartitionSchedule schedule;
    if (config.partition_csv.empty()) return schedule;
    std::string item;
    std::stringstream ss(config.partition_csv);
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        PartitionSchedule::Entry entry;
        const auto at = item.find('@');
        if (at == std::string::npos) {
            entry.effective_from = panel.weeks.front();
            entry.partition = read_partition_csv(item);
        } else {
            entry.effective_from = parse_week(item.substr(at + 1));
            entry.partition = read_partition_csv(item.substr(0, at));
        }
        schedule.entries.push_back(std::move(entry));
    }
    std::sort(schedule.entries.begin(), schedule.entries.end(),
              [](const auto& a, const auto& b) { return a.effective_from < b.effective_from; });
    return schedule;
}

std::pair<WeekStamp, WeekStamp> resolve_span(const RunConfig& config, const WeeklyPanel& panel) {
    const WeekStamp begin =
        config.span_begin.empty() ? panel.weeks.front() : parse_week(config.span_begin);
    const WeekStamp end =
        config.span_end.empty() ? panel.weeks.back() : parse_week(config.span_end);
    return {begin, end};
}

std::vector<double> truth_pct(const WeeklyPanel& raw) {
    return {raw.target.data(), raw.target.data() + raw.target.size()};
}

MethodSpec method_spec_for(const RunConfig& config, MethodKind kind) {
    MethodSpec spec;
    spec.kind = kind;
    spec.m = config.m;
    spec.N = config.N;
    spec.alpha = config.alpha;
    spec.folds = config.folds;
    spec.n_lambda = config.n_lambda;
    spec.lambda_ratio = config.lambda_ratio;
    spec.tol = config.tol;
    spec.cv_tol = config.cv_tol;
    spec.max_iter = config.max_iter;
    spec.cv_every = config.cv_every;
    return spec;
}

bool is_sgl_kind(MethodKind kind) {
    return kind == MethodKind::argo_c || kind == MethodKind::argo_lasso ||
           kind == MethodKind::exo_only_argo_c;
}

// The clustered kinds need a partition; the lasso kind does not.
void check_partitions(const PartitionSchedule& schedule, MethodKind kind) {
    if (kind != MethodKind::argo_c && kind != MethodKind::exo_only_argo_c) return;
    if (schedule.entries.empty())
        throw std::invalid_argument("method '" + method_name(kind) +
                                    "' requires a partition CSV (run the cluster command first)");
}

struct RunSet {
    std::vector<NowcastRun> runs;
};

RunSet run_methods(const RunConfig& config, const LoadedData& data,
                   const PartitionSchedule& schedule, WeekStamp begin, WeekStamp end,
                   std::ostream& log) {
    RunSet out;
    const std::string hash = config_hash(config);
    for (const auto& name : config.methods) {
        const MethodKind kind = parse_method(name);
        if (is_sgl_kind(kind)) {
            check_partitions(schedule, kind);
            MethodSpec spec = method_spec_for(config, kind);
            NowcastRun run = nowcast_argo_c(data.transformed, data.availability, schedule, begin,
                                            end, spec, config.jobs);
            run.seed = config.seed;
            run.config_hash = hash;
            out.runs.push_back(std::move(run));
        } else if (kind == MethodKind::naive) {
            NowcastRun run = nowcast_naive(data.raw, begin, end);
            run.seed = config.seed;
            run.config_hash = hash;
            out.runs.push_back(std::move(run));
        } else if (kind == MethodKind::var1) {
            MultiTargetSeries targets;
            targets.weeks = data.target_table.weeks;
            targets.names = data.target_table.names;
            targets.values_logit = data.target_table.values;
            for (Eigen::Index i = 0; i < targets.values_logit.size(); ++i) {
                double& v = targets.values_logit.data()[i];
                if (std::isfinite(v)) v = logit(v);
            }
            auto runs = nowcast_var1(targets, begin, end, config.N);
            if (!runs.empty()) runs.front().method = method_name(MethodKind::var1);
            for (auto& run : runs) {
                run.seed = config.seed;
                run.config_hash = hash;
                out.runs.push_back(std::move(run));
            }
        }
        log << "ran " << name << "\n";
    }
    return out;
}

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
    return s;
}

int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const SchemaError& e) {
        log << "schema error: " << e.what() << "\n";
        return exit_schema;
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        log << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace

int cmd_validate(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&]() -> int {
        const LoadedData data = load_data(config);
        log << "target: " << config.target_csv << ", " << data.target_table.weeks.size()
            << " weeks\n";
        log << "panel: " << data.raw.n_weeks() << " weeks x " << data.raw.n_terms()
            << " terms, " << format_week(data.raw.weeks.front()) << " .. "
            << format_week(data.raw.weeks.back()) << "\n";
        if (!config.availability_csv.empty())
            log << "availability: " << data.availability.terms.size() << " dated terms, "
                << data.availability.vintages(data.raw).size() << " vintage(s)\n";
        if (!config.partition_csv.empty()) {
            const PartitionSchedule schedule = load_partitions(config, data.raw);
            for (const auto& e : schedule.entries)
                log << "partition: " << e.partition.terms.size() << " terms in "
                    << e.partition.K() << " groups from " << format_week(e.effective_from)
                    << "\n";
        }
        log << "ok\n";
        return exit_ok;
    });
}

int cmd_cluster(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&]() -> int {
        if (config.K < 1) throw std::invalid_argument("clustering.K must be set (>= 1)");
        const LoadedData data = load_data(config);
        const WeeklyPanel& source =
            config.cluster_on_transformed ? data.transformed : data.raw;
        const fs::path out_dir = config.out_dir;

        const std::vector<WeekStamp> vintages = data.availability.vintages(data.raw);
        // A vintage is clustered on everything before its first prediction
        // date; for the opening vocabulary that date is the configured span
        // start, or the whole panel when no span is given.
        const WeekStamp base_cutoff = config.span_begin.empty()
                                          ? data.raw.weeks.back()
                                          : parse_week(config.span_begin);

        for (const WeekStamp& vintage : vintages) {
            const WeekStamp cutoff = std::max(vintage, base_cutoff);
            const Eigen::Index last_row =
                std::min<Eigen::Index>(source.index_of(std::min(cutoff, source.weeks.back())),
                                       source.n_weeks() - 1);
            if (last_row < 2)
                throw std::invalid_argument("not enough history before vintage " +
                                            format_week(vintage) + " to cluster");
            const std::vector<int> cols = data.availability.usable_columns(source, vintage);
            if (static_cast<int>(cols.size()) < config.K)
                throw std::invalid_argument("K exceeds the usable vocabulary at vintage " +
                                            format_week(vintage));

            Eigen::MatrixXd series(last_row + 1, cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j)
                series.col(static_cast<Eigen::Index>(j)) =
                    source.predictors.col(cols[j]).head(last_row + 1);

            const DistanceMatrix dist = correlation_distance(series);
            for (int c : dist.constant_series)
                log << "degenerate series: " << source.terms[cols[c]] << " is constant before "
                    << format_week(vintage) << "\n";

            const Dendrogram tree = average_linkage_tree(dist);
            if (!tree.monotone) log << "warning: non-monotone merge heights\n";
            const ClusterPartition part = cut_tree(tree, config.K);

            TermPartition named;
            for (std::size_t j = 0; j < cols.size(); ++j) {
                named.terms.push_back(source.terms[cols[j]]);
                named.group_ids.push_back(part.assignments[j]);
            }

            const std::string tag = format_week(vintage);
            write_partition_csv(out_dir / ("partition_" + tag + ".csv"), named);
            write_dendrogram_jsonl(out_dir / ("dendrogram_" + tag + ".jsonl"), tree);
            if (config.scan_k_min >= 1 && config.scan_k_max >= config.scan_k_min) {
                const int hi = std::min<int>(config.scan_k_max, dist.n());
                write_scan_csv(out_dir / ("scan_" + tag + ".csv"),
                               scan_cluster_counts(dist, config.scan_k_min, hi));
            }
            log << "vintage " << tag << ": " << cols.size() << " terms -> " << config.K
                << " groups\n";
        }
        return exit_ok;
    });
}

int cmd_nowcast(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&]() -> int {
        const LoadedData data = load_data(config);
        const PartitionSchedule schedule = load_partitions(config, data.raw);
        const auto [begin, end] = resolve_span(config, data.raw);
        const fs::path out_dir = config.runs_dir.empty() ? fs::path(config.out_dir)
                                                         : fs::path(config.runs_dir);
        fs::create_directories(out_dir);

        RunSet set = run_methods(config, data, schedule, begin, end, log);
        const std::vector<double> truth = truth_pct(data.raw);

        if (end < data.raw.weeks.front())
            log << "warning: span ends before the data starts; runs are empty\n";

        for (const auto& run : set.runs) {
            const fs::path file = out_dir / ("run_" + sanitize(run.method) + ".csv");
            write_run_csv(file, run, data.raw.weeks, truth);
            log << file.string() << ": " << run.weeks.size() << " weeks, "
                << run.skipped.size() << " skipped\n";

            const MethodKind kind = [&] {
                try {
                    return parse_method(run.method.substr(0, run.method.find(':')));
                } catch (const std::invalid_argument&) {
                    return MethodKind::naive;
                }
            }();
            if (is_sgl_kind(kind) && !run.weeks.empty()) {
                for (const auto& entry : schedule.entries) {
                    const TraceplotMatrix trace =
                        extract_traceplot(run, data.raw, entry.partition);
                    if (trace.weeks.empty()) continue;
                    const std::string tag =
                        sanitize(run.method) + "_" + format_week(entry.effective_from);
                    write_traceplot_csv(out_dir / ("traceplot_" + tag + ".csv"), trace);
                    write_text_file(out_dir / ("traceplot_" + tag + ".svg"),
                                    svg_inclusion_heatmap("Predictors included: " + run.method,
                                                          trace));
                }
                const IntervalRun intervals =
                    build_intervals(run, config.level, config.reps, config.mean_block_length,
                                    config.seed, config.jobs);
                write_interval_csv(out_dir / ("intervals_" + sanitize(run.method) + ".csv"),
                                   intervals);

                // Dump the final week's fitted model (refit at its selected lambda).
                const WeekRecord& last = run.weeks.back();
                const MethodSpec spec = method_spec_for(config, kind);
                const int m_eff = kind == MethodKind::exo_only_argo_c ? 0 : spec.m;
                const DesignWindow window = build_design_window(
                    data.transformed, last.week, spec.N, m_eff, last.active_terms);
                const auto [std_window, st] = standardize_columns(window);
                PenaltySpec pen;
                pen.alpha = kind == MethodKind::argo_lasso ? 1.0 : spec.alpha;
                pen.lambda = last.lambda;
                pen.groups =
                    kind == MethodKind::argo_lasso
                        ? PenaltySpec::singleton_groups(static_cast<int>(last.active_terms.size()))
                        : schedule.active_at(last.week).groups_over(data.raw, last.active_terms);
                FitOptions opts;
                opts.tol = spec.tol;
                opts.max_iter = spec.max_iter;
                std::vector<std::string> names;
                for (int c : last.active_terms) names.push_back(data.raw.terms[c]);
                write_model_csv(out_dir / ("model_" + sanitize(run.method) + ".csv"),
                                fit(std_window, pen, opts), names);
            }

            for (const auto& [week, reason] : run.skipped)
                log << "  skipped " << format_week(week) << ": " << reason << "\n";
        }

        std::ofstream manifest(out_dir / "manifest.txt");
        manifest << "config_hash = " << config_hash(config) << "\n";
        manifest << "version = " << kVersion << "\n";
        manifest << "seed = " << config.seed << "\n";
        return exit_ok;
    });
}

int cmd_intervals(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&]() -> int {
        const LoadedData data = load_data(config);
        const PartitionSchedule schedule = load_partitions(config, data.raw);
        const auto [begin, end] = resolve_span(config, data.raw);
        const fs::path out_dir = config.runs_dir.empty() ? fs::path(config.out_dir)
                                                         : fs::path(config.runs_dir);

        bool any = false;
        for (const auto& name : config.methods) {
            const MethodKind kind = parse_method(name);
            if (!is_sgl_kind(kind)) continue;
            check_partitions(schedule, kind);
            const MethodSpec spec = method_spec_for(config, kind);
            const NowcastRun run = nowcast_argo_c(data.transformed, data.availability, schedule,
                                                  begin, end, spec, config.jobs);
            if (run.weeks.empty()) continue;
            const IntervalRun intervals = build_intervals(
                run, config.level, config.reps, config.mean_block_length, config.seed,
                config.jobs);
            write_interval_csv(out_dir / ("intervals_" + sanitize(run.method) + ".csv"),
                               intervals);
            log << "intervals for " << run.method << ": " << intervals.weeks.size()
                << " weeks at level " << config.level << "\n";
            any = true;
        }
        return any ? exit_ok : exit_empty;
    });
}

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
    return guarded(log, [&]() -> int {
        if (config.target_csv.empty())
            throw std::invalid_argument("evaluate needs the target CSV for the truth series");
        const WideTable target = read_target_csv(config.target_csv);

        const fs::path runs_dir = config.runs_dir.empty() ? fs::path(config.out_dir)
                                                          : fs::path(config.runs_dir);
        std::vector<PredictionSeries> runs;
        std::vector<fs::path> run_files;
        if (fs::is_directory(runs_dir)) {
            for (const auto& e : fs::directory_iterator(runs_dir))
                if (e.is_regular_file() && e.path().filename().string().starts_with("run_") &&
                    e.path().extension() == ".csv")
                    run_files.push_back(e.path());
        }
        std::sort(run_files.begin(), run_files.end());
        for (const auto& f : run_files) runs.push_back(read_run_csv(f));
        for (const auto& item : config.external_prediction_csvs) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("external prediction entries look like name=path");
            runs.push_back(
                read_external_prediction_csv(item.substr(eq + 1), item.substr(0, eq)));
        }
        if (runs.empty()) throw std::invalid_argument("no runs found under " + runs_dir.string());

        std::vector<double> truth(target.weeks.size());
        for (std::size_t i = 0; i < target.weeks.size(); ++i) truth[i] = target.values(i, 0);

        // Season slices over the evaluated years plus the whole period.
        int first_year = config.season_first_year, last_year = config.season_last_year;
        if (first_year == 0 || last_year == 0) {
            first_year = target.weeks.front().year;
            last_year = target.weeks.back().year;
        }
        std::vector<PeriodSlice> slices =
            season_slices(first_year, last_year,
                          {{"whole period", target.weeks.front(), target.weeks.back()}});

        const MetricReport report =
            build_report(runs, target.weeks, truth, slices, config.strict_intersection);

        bool overlap = false;
        for (const auto& row : report.cells)
            for (const auto& cell : row)
                if (cell.n_weeks > 0) overlap = true;
        if (!overlap) {
            log << "no overlapping weeks between runs and truth\n";
            return exit_empty;
        }

        const fs::path out_dir = config.out_dir;
        write_report_csv(out_dir / "report.csv", report);

        std::vector<SvgSeries> chart;
        chart.push_back({"truth", target.weeks, truth});
        for (const auto& r : runs) chart.push_back({r.method, r.weeks, r.values_pct});
        write_text_file(out_dir / "predictions.svg",
                        svg_line_chart("Weekly %ILI: truth vs nowcasts", chart));

        if (fs::is_directory(runs_dir)) {
            for (const auto& e : fs::directory_iterator(runs_dir)) {
                const std::string name = e.path().filename().string();
                if (e.is_regular_file() && name.starts_with("traceplot_") &&
                    e.path().extension() == ".csv") {
                    const TraceplotMatrix trace = read_traceplot_csv(e.path());
                    fs::path svg = out_dir / e.path().filename();
                    svg.replace_extension(".svg");
                    write_text_file(svg, svg_inclusion_heatmap("Predictors included", trace));
                }
            }
        }
        log << "report.csv written for " << report.methods.size() << " method(s), "
            << slices.size() << " slice(s)\n";
        return exit_ok;
    });
}

int cmd_synth(const RunConfig& config, const SynthPanelSpec& spec, std::ostream& log) {
    return guarded(log, [&]() -> int {
        const SynthPanel fixture = synth_panel(spec);
        const fs::path out_dir = config.out_dir;

        WideTable target;
        target.weeks = fixture.raw.weeks;
        target.names = {"ili"};
        target.values = fixture.raw.target;

        WideTable predictors;
        predictors.weeks = fixture.raw.weeks;
        predictors.names = fixture.raw.terms;
        predictors.values = fixture.raw.predictors;

        write_wide_csv(out_dir / "target.csv", target);
        write_wide_csv(out_dir / "predictors.csv", predictors);
        write_partition_csv(out_dir / "partition_true.csv", fixture.true_partition);
        if (!fixture.availability.terms.empty()) {
            std::ofstream out(out_dir / "availability.csv");
            out << "term,first_usable_date\n";
            for (std::size_t i = 0; i < fixture.availability.terms.size(); ++i)
                out << fixture.availability.terms[i] << ','
                    << format_week(fixture.availability.first_usable[i]) << '\n';
        }
        log << "fixture: " << spec.weeks << " weeks, " << spec.n_terms() << " terms in "
            << spec.n_groups << " groups (seed " << spec.seed << ") -> " << out_dir.string()
            << "\n";
        return exit_ok;
    });
}

}  // namespace argoc
