#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "argoc/panel.hpp"

namespace argoc {

/// Raised when a rolling window would need target history before the panel starts.
struct InsufficientHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Regression layout for one prediction week T: N response rows (weeks T-N..T-1),
/// m lagged-target columns (most recent lag first) and p exogenous columns.
/// Row t of ar_block only ever holds target values strictly before row t's
/// response week; the prediction row takes exogenous values from week T itself
/// and lags from T-1..T-m.
struct DesignWindow {
    Eigen::VectorXd response;  // N
    Eigen::MatrixXd ar_block;  // N x m, column s-1 holds y_{t-s}
    Eigen::MatrixXd exo_block; // N x p
    Eigen::VectorXd pred_ar;   // m
    Eigen::VectorXd pred_exo;  // p
    WeekStamp target_week{};
    WeekStamp first_response_week{};
    std::vector<int> exo_columns;  // panel column behind each exo column

    Eigen::Index n() const { return response.size(); }
    Eigen::Index m() const { return ar_block.cols(); }
    Eigen::Index p() const { return exo_block.cols(); }
};

/// Extracts the window ending at target week T from a transformed panel.
/// `exo_columns` restricts the predictor set (empty = all columns).
/// Throws InsufficientHistory when fewer than N+m target values precede T.
DesignWindow build_design_window(const WeeklyPanel& panel, WeekStamp T, int N, int m,
                                 const std::vector<int>& exo_columns = {});

/// Centers/scales applied to the [ar | exo] columns of a window.
struct Standardization {
    Eigen::VectorXd center;         // m + p
    Eigen::VectorXd scale;          // m + p; 1 for constant columns
    std::vector<std::uint8_t> constant;  // flagged constant columns
};

/// Gives every nonconstant column sample mean 0 and sample (n-1) standard
/// deviation 1 over the training rows; the prediction row is mapped with the
/// same centers and scales. Constant columns keep scale 1 and are flagged.
std::pair<DesignWindow, Standardization> standardize_columns(const DesignWindow& window);

}  // namespace argoc
