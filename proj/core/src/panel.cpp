#include "argoc/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace argoc {

Eigen::Index WeeklyPanel::index_of(WeekStamp w) const {
    if (weeks.empty() || w < weeks.front() || w > weeks.back()) return -1;
    return week_diff(w, weeks.front());
}

bool WeeklyPanel::target_known(Eigen::Index row) const {
    return row >= 0 && row < target.size() && std::isfinite(target[row]);
}

Eigen::Index WeeklyPanel::last_target_row() const {
    for (Eigen::Index i = target.size() - 1; i >= 0; --i)
        if (std::isfinite(target[i])) return i;
    return -1;
}

double logit(double p_percent) {
    if (!(p_percent > 0.0 && p_percent < 100.0))
        throw std::domain_error("logit requires a percentage strictly inside (0, 100)");
    const double q = p_percent / 100.0;
    return std::log(q / (1.0 - q));
}

double inverse_logit(double x) {
    return 100.0 / (1.0 + std::exp(-x));
}

double log_volume(double v, double eps) {
    if (v < 0.0) throw std::domain_error("search volumes must be nonnegative");
    if (!(eps > 0.0)) throw std::domain_error("log-volume eps must be positive");
    return std::log(v + eps);
}

void validate_panel(const WeeklyPanel& panel) {
    const auto n = panel.n_weeks();
    if (n == 0) throw std::invalid_argument("panel: empty week range");
    if (panel.target.size() != n)
        throw std::invalid_argument("panel: target length does not match week range");
    if (panel.predictors.rows() != n)
        throw std::invalid_argument("panel: predictor rows do not match week range");
    if (panel.predictors.cols() < 1)
        throw std::invalid_argument("panel: at least one predictor series is required");
    if (static_cast<Eigen::Index>(panel.terms.size()) != panel.predictors.cols())
        throw std::invalid_argument("panel: term names do not match predictor columns");

    for (Eigen::Index i = 1; i < n; ++i) {
        if (week_diff(panel.weeks[i], panel.weeks[i - 1]) != 1)
            throw std::invalid_argument("panel: weeks must be contiguous, gap before " +
                                        format_week(panel.weeks[i]));
    }

    std::set<std::string> seen;
    for (const auto& t : panel.terms)
        if (!seen.insert(t).second)
            throw std::invalid_argument("panel: duplicate predictor name '" + t + "'");

    bool missing_started = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        const bool known = std::isfinite(panel.target[i]);
        if (!known) missing_started = true;
        if (known && missing_started)
            throw std::invalid_argument("panel: target missing other than at the tail, week " +
                                        format_week(panel.weeks[i]));
        if (known && panel.state == TransformState::raw &&
            !(panel.target[i] > 0.0 && panel.target[i] < 100.0))
            throw std::invalid_argument("panel: raw target outside (0, 100) at week " +
                                        format_week(panel.weeks[i]));
    }
    if (panel.last_target_row() < 0)
        throw std::invalid_argument("panel: target has no observed values");

    if (panel.state == TransformState::raw && (panel.predictors.array() < 0.0).any())
        throw std::invalid_argument("panel: raw predictor volumes must be nonnegative");
    if (!panel.predictors.array().isFinite().all())
        throw std::invalid_argument("panel: predictor values must be finite");
}

WeeklyPanel transform_panel(const WeeklyPanel& raw, double eps) {
    if (raw.state != TransformState::raw)
        throw std::invalid_argument("transform_panel: panel already transformed");
    validate_panel(raw);
    WeeklyPanel out = raw;
    out.state = TransformState::transformed;
    out.log_eps = eps;
    for (Eigen::Index i = 0; i < out.target.size(); ++i)
        if (std::isfinite(out.target[i])) out.target[i] = logit(out.target[i]);
    out.predictors = (raw.predictors.array() + eps).log();
    return out;
}

WeeklyPanel untransform_panel(const WeeklyPanel& transformed) {
    if (transformed.state != TransformState::transformed)
        throw std::invalid_argument("untransform_panel: panel is not transformed");
    WeeklyPanel out = transformed;
    out.state = TransformState::raw;
    for (Eigen::Index i = 0; i < out.target.size(); ++i)
        if (std::isfinite(out.target[i])) out.target[i] = inverse_logit(out.target[i]);
    out.predictors = transformed.predictors.array().exp() - transformed.log_eps;
    // exp/log round trips can leave volumes a hair below zero.
    out.predictors = out.predictors.cwiseMax(0.0);
    return out;
}

std::vector<int> AvailabilityTable::usable_columns(const WeeklyPanel& panel, WeekStamp at) const {
    std::unordered_map<std::string, WeekStamp> first;
    for (std::size_t i = 0; i < terms.size(); ++i) first[terms[i]] = first_usable[i];
    std::vector<int> cols;
    cols.reserve(panel.terms.size());
    for (int j = 0; j < static_cast<int>(panel.terms.size()); ++j) {
        auto it = first.find(panel.terms[j]);
        if (it == first.end() || !(at < it->second)) cols.push_back(j);
    }
    return cols;
}

std::vector<WeekStamp> AvailabilityTable::vintages(const WeeklyPanel& panel) const {
    std::set<WeekStamp> pts;
    pts.insert(panel.weeks.front());
    for (const auto& w : first_usable)
        if (w > panel.weeks.front() && w <= panel.weeks.back()) pts.insert(w);
    return {pts.begin(), pts.end()};
}

}  // namespace argoc
