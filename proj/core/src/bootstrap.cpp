#include "argoc/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "argoc/panel.hpp"
#include "parallel.hpp"

namespace argoc {

namespace {

// splitmix64, used to derive independent per-week seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<double> stationary_bootstrap_resample(std::span<const double> residuals,
                                                  double mean_block_length,
                                                  std::mt19937_64& rng) {
    const std::size_t L = residuals.size();
    if (L < 2) throw std::invalid_argument("stationary bootstrap: need at least 2 residuals");
    if (!(mean_block_length > 1.0))
        throw std::invalid_argument("stationary bootstrap: mean block length must exceed 1");

    std::uniform_int_distribution<std::size_t> start(0, L - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double restart_prob = 1.0 / mean_block_length;

    std::vector<double> out(L);
    std::size_t idx = start(rng);
    out[0] = residuals[idx];
    for (std::size_t t = 1; t < L; ++t) {
        if (unit(rng) < restart_prob)
            idx = start(rng);
        else
            idx = (idx + 1) % L;
        out[t] = residuals[idx];
    }
    return out;
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

IntervalRun build_intervals(const NowcastRun& run, double level, int reps,
                            double mean_block_length, std::uint64_t seed, int jobs) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("build_intervals: level must lie in (0, 1)");
    if (reps < 2) throw std::invalid_argument("build_intervals: need reps >= 2");

    IntervalRun out;
    out.method = run.method;
    out.level = level;
    out.reps = reps;
    out.mean_block_length = mean_block_length;
    out.seed = seed;
    const std::size_t n = run.weeks.size();
    out.weeks.resize(n);
    out.lower.resize(n);
    out.prediction.resize(n);
    out.upper.resize(n);
    out.degenerate.assign(n, 0);

    detail::parallel_for(n, jobs, [&](std::size_t i) {
        const WeekRecord& rec = run.weeks[i];
        out.weeks[i] = rec.week;
        out.prediction[i] = rec.prediction_pct;
        const Eigen::VectorXd& res = rec.residuals_logit;
        if (res.size() < 2)
            throw std::invalid_argument("build_intervals: week " + format_week(rec.week) +
                                        " carries no training residuals");

        if (res.cwiseAbs().maxCoeff() == 0.0) {
            out.lower[i] = rec.prediction_pct;
            out.upper[i] = rec.prediction_pct;
            out.degenerate[i] = 1;
            return;
        }

        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(week_index(rec.week))));
        const std::span<const double> span(res.data(), static_cast<std::size_t>(res.size()));
        std::vector<double> pooled;
        pooled.reserve(static_cast<std::size_t>(reps) * span.size());
        for (int b = 0; b < reps; ++b) {
            const std::vector<double> path =
                stationary_bootstrap_resample(span, mean_block_length, rng);
            pooled.insert(pooled.end(), path.begin(), path.end());
        }
        std::sort(pooled.begin(), pooled.end());
        const auto sorted_q = [&](double p) {
            const double h = (static_cast<double>(pooled.size()) - 1.0) * p;
            const std::size_t lo = static_cast<std::size_t>(std::floor(h));
            const std::size_t hi = std::min(lo + 1, pooled.size() - 1);
            return pooled[lo] + (h - static_cast<double>(lo)) * (pooled[hi] - pooled[lo]);
        };
        const double lo_q = sorted_q((1.0 - level) / 2.0);
        const double hi_q = sorted_q(1.0 - (1.0 - level) / 2.0);
        out.lower[i] = inverse_logit(rec.prediction_logit + lo_q);
        out.upper[i] = inverse_logit(rec.prediction_logit + hi_q);
    });
    return out;
}

double coverage(const IntervalRun& intervals, const std::vector<WeekStamp>& truth_weeks,
                const std::vector<double>& truth_pct) {
    std::map<WeekStamp, double> truth;
    for (std::size_t i = 0; i < truth_weeks.size(); ++i) truth[truth_weeks[i]] = truth_pct[i];

    long n = 0, hit = 0;
    for (std::size_t i = 0; i < intervals.weeks.size(); ++i) {
        auto it = truth.find(intervals.weeks[i]);
        if (it == truth.end() || !std::isfinite(it->second)) continue;
        ++n;
        if (intervals.lower[i] <= it->second && it->second <= intervals.upper[i]) ++hit;
    }
    if (n == 0) throw std::invalid_argument("coverage: intervals and truth share no weeks");
    return static_cast<double>(hit) / static_cast<double>(n);
}

}  // namespace argoc
