#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "argoc/week.hpp"

namespace argoc {

/// Inputs to the cross-regional boosting step, all on the logit scale and all
/// dated so that week T's row only uses information available at T: the raw
/// search-only regional estimates for T, the national estimate for T, and the
/// regional truths for T-1.
struct BoostInputs {
    std::vector<WeekStamp> weeks;
    Eigen::MatrixXd raw_regional;  // weeks x R
    Eigen::VectorXd national;      // weeks
    Eigen::MatrixXd lagged_truth;  // weeks x R (truth at T-1)
    Eigen::MatrixXd truth;         // weeks x R (fitting target; week T's value)

    Eigen::Index n_regions() const { return raw_regional.cols(); }
    Eigen::Index n_features() const { return 2 * raw_regional.cols() + 1; }

    /// Feature vector for one week: raw estimates, national, lagged truths.
    Eigen::VectorXd features_at(Eigen::Index row) const;
};

struct IncreaseShrinkage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Best linear predictor with moment estimates and diagonal shrinkage:
/// the feature covariance becomes (1-w)*S + w*diag(S), which stays positive
/// semidefinite for w in [0, 1]. Throws IncreaseShrinkage when the shrunk
/// covariance is still numerically singular.
struct BlpModel {
    Eigen::VectorXd mean_target;    // R
    Eigen::VectorXd mean_features;  // F = 2R+1
    Eigen::MatrixXd coef;           // R x F
    double shrinkage = 0.0;
};

BlpModel fit_blp(const BoostInputs& inputs, Eigen::Index train_begin, Eigen::Index train_end,
                 double shrinkage);

/// mu_y + B (f - mu_f).
Eigen::VectorXd boost_predict(const BlpModel& model, const Eigen::VectorXd& features);

}  // namespace argoc
