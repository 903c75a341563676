#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "argoc/week.hpp"

namespace argoc {

enum class TransformState { raw, transformed };

/// Weekly surveillance panel: one target series (%ILI) plus p named search-volume
/// series over a contiguous, strictly increasing week range. The target may be
/// missing (NaN) only at the tail, which models the one-week reporting lag.
///
/// In the raw state the target is on the percent scale in (0, 100) and volumes
/// are nonnegative; the transformed state holds logit(target/100) and
/// ln(volume + log_eps).
struct WeeklyPanel {
    std::vector<WeekStamp> weeks;
    Eigen::VectorXd target;
    std::vector<std::string> terms;
    Eigen::MatrixXd predictors;  // weeks x terms
    TransformState state = TransformState::raw;
    double log_eps = 0.5;

    Eigen::Index n_weeks() const { return static_cast<Eigen::Index>(weeks.size()); }
    Eigen::Index n_terms() const { return predictors.cols(); }

    /// Row of `w`, or -1 when the panel does not cover it.
    Eigen::Index index_of(WeekStamp w) const;

    bool target_known(Eigen::Index row) const;

    /// Index of the last week with a known target, or -1.
    Eigen::Index last_target_row() const;
};

double logit(double p_percent);
double inverse_logit(double x);

/// ln(v + eps); the eps guard keeps zero-traffic weeks finite.
double log_volume(double v, double eps);

/// Throws std::invalid_argument describing the first violated invariant.
void validate_panel(const WeeklyPanel& panel);

WeeklyPanel transform_panel(const WeeklyPanel& raw, double eps = 0.5);
WeeklyPanel untransform_panel(const WeeklyPanel& transformed);

/// Per-term first-usable week, for vocabularies collected in vintages.
/// Terms absent from the table are usable from the start of the panel.
struct AvailabilityTable {
    std::vector<std::string> terms;
    std::vector<WeekStamp> first_usable;

    /// Panel columns usable at week `at`, in panel column order.
    std::vector<int> usable_columns(const WeeklyPanel& panel, WeekStamp at) const;

    /// Distinct first-usable weeks that occur in `panel`, sorted; the implicit
    /// "start of panel" vintage is included. These are the vintage switch points.
    std::vector<WeekStamp> vintages(const WeeklyPanel& panel) const;
};

}  // namespace argoc
