#include "argoc/metrics.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace argoc {

std::vector<PeriodSlice> season_slices(int first_year, int last_year,
                                       std::vector<PeriodSlice> extra) {
    std::vector<PeriodSlice> out;
    for (int y = first_year; y < last_year; ++y) {
        PeriodSlice s;
        char name[16];
        std::snprintf(name, sizeof(name), "'%02d-'%02d", y % 100, (y + 1) % 100);
        s.name = name;
        s.begin = {y, 40};
        s.end = {y + 1, 20};
        out.push_back(std::move(s));
    }
    for (auto& e : extra) out.push_back(std::move(e));
    return out;
}

namespace {

void check_aligned(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("metric: series lengths differ");
    if (pred.empty()) throw std::invalid_argument("metric: empty overlap");
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
    check_aligned(pred, truth);
    double ss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth) {
    check_aligned(pred, truth);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
    return s / static_cast<double>(pred.size());
}

double pearson(std::span<const double> pred, std::span<const double> truth) {
    check_aligned(pred, truth);
    if (pred.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    const double n = static_cast<double>(pred.size());
    double mp = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mp += pred[i];
        mt += truth[i];
    }
    mp /= n;
    mt /= n;
    double spt = 0.0, spp = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        spt += (pred[i] - mp) * (truth[i] - mt);
        spp += (pred[i] - mp) * (pred[i] - mp);
        stt += (truth[i] - mt) * (truth[i] - mt);
    }
    // Variance guard: a correlation against a flat span is noise, not signal.
    if (spp / n < 1e-12 || stt / n < 1e-12)
        throw std::invalid_argument("pearson: series is constant over the span");
    return spt / std::sqrt(spp * stt);
}

PredictionSeries to_series(const NowcastRun& run) {
    PredictionSeries s;
    s.method = run.method;
    s.weeks.reserve(run.weeks.size());
    s.values_pct.reserve(run.weeks.size());
    for (const auto& rec : run.weeks) {
        s.weeks.push_back(rec.week);
        s.values_pct.push_back(rec.prediction_pct);
    }
    return s;
}

MetricReport build_report(const std::vector<PredictionSeries>& runs,
                          const std::vector<WeekStamp>& truth_weeks,
                          const std::vector<double>& truth_pct,
                          const std::vector<PeriodSlice>& slices, bool strict_intersection) {
    if (runs.empty()) throw std::invalid_argument("build_report: no runs supplied");
    if (truth_weeks.size() != truth_pct.size())
        throw std::invalid_argument("build_report: truth weeks/values mismatch");

    std::map<WeekStamp, double> truth;
    for (std::size_t i = 0; i < truth_weeks.size(); ++i)
        if (std::isfinite(truth_pct[i])) truth[truth_weeks[i]] = truth_pct[i];

    std::optional<std::set<WeekStamp>> common;
    if (strict_intersection) {
        for (const auto& run : runs) {
            std::set<WeekStamp> mine(run.weeks.begin(), run.weeks.end());
            if (!common) {
                common = std::move(mine);
            } else {
                std::set<WeekStamp> kept;
                for (const auto& w : *common)
                    if (mine.count(w)) kept.insert(w);
                *common = std::move(kept);
            }
        }
    }

    MetricReport report;
    report.slices = slices;
    report.cells.resize(runs.size(), std::vector<MetricCell>(slices.size()));
    for (const auto& run : runs) report.methods.push_back(run.method);

    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (std::size_t s = 0; s < slices.size(); ++s) {
            std::vector<double> p, t;
            for (std::size_t i = 0; i < runs[r].weeks.size(); ++i) {
                const WeekStamp w = runs[r].weeks[i];
                if (w < slices[s].begin || slices[s].end < w) continue;
                if (common && !common->count(w)) continue;
                auto it = truth.find(w);
                if (it == truth.end()) continue;
                p.push_back(runs[r].values_pct[i]);
                t.push_back(it->second);
            }
            MetricCell& cell = report.cells[r][s];
            cell.n_weeks = static_cast<int>(p.size());
            if (p.empty()) continue;
            cell.rmse = rmse(p, t);
            cell.mae = mae(p, t);
            try {
                cell.correlation = pearson(p, t);
                cell.has_correlation = true;
            } catch (const std::invalid_argument&) {
                cell.has_correlation = false;
            }
        }
    }

    for (std::size_t s = 0; s < slices.size(); ++s) {
        double best_rmse = std::numeric_limits<double>::infinity();
        double best_mae = std::numeric_limits<double>::infinity();
        double best_corr = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const MetricCell& c = report.cells[r][s];
            if (c.n_weeks == 0) continue;
            best_rmse = std::min(best_rmse, c.rmse);
            best_mae = std::min(best_mae, c.mae);
            if (c.has_correlation) best_corr = std::max(best_corr, c.correlation);
        }
        for (std::size_t r = 0; r < runs.size(); ++r) {
            MetricCell& c = report.cells[r][s];
            if (c.n_weeks == 0) continue;
            c.rmse_best = c.rmse == best_rmse;
            c.mae_best = c.mae == best_mae;
            c.correlation_best = c.has_correlation && c.correlation == best_corr;
        }
    }
    return report;
}

}  // namespace argoc
