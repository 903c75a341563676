#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "argoc/nowcast.hpp"
#include "argoc/week.hpp"

namespace argoc {

/// One stationary-bootstrap resample of the residual series: blocks start at
/// uniform positions, continue with probability 1 - 1/q (so block lengths are
/// geometric with mean q) and wrap around circularly.
std::vector<double> stationary_bootstrap_resample(std::span<const double> residuals,
                                                  double mean_block_length,
                                                  std::mt19937_64& rng);

/// Type-7 (linear interpolation) sample quantile; values need not be sorted.
double quantile_type7(std::vector<double> values, double p);

/// Weekly prediction intervals on the percent scale. The point prediction is
/// not required to sit inside (residual quantiles can be asymmetric); the
/// invariant is lower < upper except where residuals were all zero, which is
/// flagged as degenerate.
struct IntervalRun {
    std::string method;
    std::vector<WeekStamp> weeks;
    std::vector<double> lower;       // percent
    std::vector<double> prediction;  // percent
    std::vector<double> upper;       // percent
    std::vector<std::uint8_t> degenerate;
    double level = 0.95;
    int reps = 2000;
    double mean_block_length = 8.0;
    std::uint64_t seed = 0;
};

/// Per week: resample the week's training residuals `reps` times, pool the
/// resampled values, and offset the logit-scale prediction by the pooled
/// (alpha/2, 1-alpha/2) quantiles before mapping back to percent. Weekly RNG
/// streams are derived from the seed, so weeks are independent and the result
/// is reproducible under any parallel schedule.
IntervalRun build_intervals(const NowcastRun& run, double level, int reps,
                            double mean_block_length, std::uint64_t seed, int jobs = 1);

/// Fraction of overlapping weeks with lower <= truth <= upper.
double coverage(const IntervalRun& intervals, const std::vector<WeekStamp>& truth_weeks,
                const std::vector<double>& truth_pct);

}  // namespace argoc
