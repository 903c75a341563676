#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argoc/nowcast.hpp"
#include "argoc/week.hpp"

namespace argoc {

struct PeriodSlice {
    std::string name;
    WeekStamp begin{};
    WeekStamp end{};
};

/// One slice per flu season: week 40 of year y through week 20 of year y+1,
/// named 'YY-'YY, for y in [first_year, last_year); user slices appended.
std::vector<PeriodSlice> season_slices(int first_year, int last_year,
                                       std::vector<PeriodSlice> extra = {});

/// All metrics operate on the percent scale over aligned series.
double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);

/// Throws when either series is (near) constant; correlation is undefined there.
double pearson(std::span<const double> pred, std::span<const double> truth);

/// A method's dated predictions (percent scale); built from a NowcastRun or
/// ingested directly for external benchmarks like GFT.
struct PredictionSeries {
    std::string method;
    std::vector<WeekStamp> weeks;
    std::vector<double> values_pct;
};

PredictionSeries to_series(const NowcastRun& run);

struct MetricCell {
    int n_weeks = 0;
    double rmse = 0.0;
    double mae = 0.0;
    double correlation = 0.0;
    bool has_correlation = false;  // false for empty or near-constant spans
    bool rmse_best = false, mae_best = false, correlation_best = false;
};

struct MetricReport {
    std::vector<std::string> methods;
    std::vector<PeriodSlice> slices;
    std::vector<std::vector<MetricCell>> cells;  // [method][slice]
};

/// Metrics per (method, slice) over the weeks where both prediction and truth
/// exist; with strict_intersection only weeks covered by every method count.
/// Best flags mark the minimum rmse/mae and maximum correlation per slice.
MetricReport build_report(const std::vector<PredictionSeries>& runs,
                          const std::vector<WeekStamp>& truth_weeks,
                          const std::vector<double>& truth_pct,
                          const std::vector<PeriodSlice>& slices,
                          bool strict_intersection = false);

}  // namespace argoc
