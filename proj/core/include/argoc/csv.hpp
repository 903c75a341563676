#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "argoc/bootstrap.hpp"
#include "argoc/clustering.hpp"
#include "argoc/metrics.hpp"
#include "argoc/nowcast.hpp"
#include "argoc/panel.hpp"

namespace argoc {

/// Input file violates its schema; the message carries file and line number.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form of x (stable across runs).
std::string format_number(double x);

/// Wide date-indexed table: header `date,<name_1>,...`; dates as YYYY-Www or
/// YYYY-MM-DD. Empty cells read as NaN when `allow_missing`.
struct WideTable {
    std::vector<WeekStamp> weeks;
    std::vector<std::string> names;
    Eigen::MatrixXd values;
};

WideTable read_wide_csv(const std::filesystem::path& path, bool allow_missing);
void write_wide_csv(const std::filesystem::path& path, const WideTable& table);

/// `date,ili` (or any single/multi series target table).
WideTable read_target_csv(const std::filesystem::path& path);

/// `date,<term_1>,...,<term_p>`; no missing values allowed.
WideTable read_predictor_csv(const std::filesystem::path& path);

/// `term,first_usable_date`.
AvailabilityTable read_availability_csv(const std::filesystem::path& path);

/// `term,group_id`.
TermPartition read_partition_csv(const std::filesystem::path& path);
void write_partition_csv(const std::filesystem::path& path, const TermPartition& partition);

/// One JSON merge record per line: {"left":[...],"right":[...],"height":h}.
void write_dendrogram_jsonl(const std::filesystem::path& path, const Dendrogram& tree);

void write_scan_csv(const std::filesystem::path& path, const std::vector<ClusterScanRow>& rows);

/// Aligns a single-series target with a predictor table into a raw panel:
/// weeks run from the later of the two starts through the predictor end, and
/// the target may trail off into NaN (the reporting lag).
WeeklyPanel assemble_panel(const WideTable& target, const WideTable& predictors);

/// `date,prediction,truth,lambda,method`; truth cells are empty when unknown.
void write_run_csv(const std::filesystem::path& path, const NowcastRun& run,
                   const std::vector<WeekStamp>& truth_weeks,
                   const std::vector<double>& truth_pct);
PredictionSeries read_run_csv(const std::filesystem::path& path);

/// `date,prediction` (external benchmarks such as GFT).
PredictionSeries read_external_prediction_csv(const std::filesystem::path& path,
                                              const std::string& method);

void write_traceplot_csv(const std::filesystem::path& path, const TraceplotMatrix& trace);

/// Reads a traceplot back; group banding is not stored in the CSV, so
/// column_group comes back all zero unless re-derived from a partition.
TraceplotMatrix read_traceplot_csv(const std::filesystem::path& path);

/// `date,lower,prediction,upper,level`.
void write_interval_csv(const std::filesystem::path& path, const IntervalRun& run);

/// `date,region,raw,boosted,truth` (logit-scale inputs already mapped to percent).
struct BoostRow {
    WeekStamp week{};
    std::string region;
    double raw_pct = 0.0;
    double boosted_pct = 0.0;
    double truth_pct = 0.0;
};
void write_boost_csv(const std::filesystem::path& path, const std::vector<BoostRow>& rows);

/// `metric,method,<slice_1>,...` with `--` for missing cells, plus a
/// companion `<stem>.best.csv` of 0/1 best flags.
void write_report_csv(const std::filesystem::path& path, const MetricReport& report);

/// `name,value` rows: intercept, ar_<s>, each term coefficient, then
/// lambda/alpha/converged/objective.
void write_model_csv(const std::filesystem::path& path, const SglModel& model,
                     const std::vector<std::string>& term_names);

}  // namespace argoc
