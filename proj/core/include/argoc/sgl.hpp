#pragma once

#include <Eigen/Core>
#include <vector>

#include "argoc/design.hpp"

namespace argoc {

/// Sparse group lasso penalty over a DesignWindow:
///
///   (1/2N) sum residual^2
///     + alpha * lambda * (||gamma||_1 + ||beta||_1)
///     + (1 - alpha) * lambda * sum_k sqrt(p_k) ||beta_k||_2
///
/// gamma is the lagged-target block (L1 only), beta the exogenous block whose
/// groups carry the extra L2 term. The intercept is never penalized. alpha = 1
/// is the plain lasso; alpha = 0 the group lasso.
struct PenaltySpec {
    double alpha = 0.95;
    double lambda = 0.0;
    std::vector<std::vector<int>> groups;  // partition of the exo columns

    /// Singleton groups over p columns (the lasso layout).
    static std::vector<std::vector<int>> singleton_groups(int p);
};

struct SglModel {
    double intercept = 0.0;
    Eigen::VectorXd ar_coef;
    Eigen::VectorXd exo_coef;
    PenaltySpec penalty;
    double objective_value = 0.0;
    int n_iterations = 0;
    bool converged = false;
    double kkt_residual = 0.0;
};

struct FitOptions {
    double tol = 1e-7;
    int max_iter = 10000;
    double kkt_tol = 1e-4;
    std::vector<double>* objective_trace = nullptr;  // per outer cycle, for diagnostics
};

double soft_threshold(double z, double t);

double objective(const DesignWindow& window, double intercept, const Eigen::VectorXd& ar_coef,
                 const Eigen::VectorXd& exo_coef, const PenaltySpec& penalty);

/// Subgradient condition for group k to be exactly zero at a stationary point:
/// || S(X_k' r / N, alpha*lambda) ||_2 <= (1-alpha)*lambda*sqrt(p_k),
/// with r the residual excluding group k's contribution.
bool group_is_zero(const DesignWindow& window, const Eigen::VectorXd& residual_excluding_group,
                   int group, const PenaltySpec& penalty);

/// Block coordinate descent: groups are zeroed by the condition above or
/// minimized by proximal gradient with backtracking; the lag block and the
/// intercept move by exact coordinate updates. The objective never increases
/// across outer cycles. Non-convergence sets converged = false, no throw.
SglModel fit(const DesignWindow& window, const PenaltySpec& penalty, const FitOptions& opts = {});

/// Same, warm-started from a previous solution (used along lambda paths).
SglModel fit_warm(const DesignWindow& window, const PenaltySpec& penalty, const SglModel& warm,
                  const FitOptions& opts = {});

/// Warm-started fits along a decreasing lambda path, sharing one set of
/// precomputed group blocks.
std::vector<SglModel> fit_path(const DesignWindow& window, const PenaltySpec& base,
                               const std::vector<double>& path, const FitOptions& opts = {});

/// Max stationarity violation over all blocks (0 at an exact optimum).
double kkt_residual(const DesignWindow& window, const SglModel& model);

/// Fitted value for the window's prediction row.
double predict(const DesignWindow& window, const SglModel& model);

/// In-sample fitted residuals over the N training rows.
Eigen::VectorXd training_residuals(const DesignWindow& window, const SglModel& model);

/// Smallest lambda putting every penalized coefficient at zero, at beta=gamma=0
/// and intercept = mean(response).
double lambda_max(const DesignWindow& window, const PenaltySpec& base);

/// Geometric grid of n_lambda values from lambda_max down to ratio*lambda_max.
std::vector<double> lambda_path(const DesignWindow& window, const PenaltySpec& base, int n_lambda,
                                double ratio);

struct CvRow {
    double lambda = 0.0;
    double mean_error = 0.0;  // held-out mean squared error
    double std_error = 0.0;   // standard error over folds
};

struct CvResult {
    double lambda_star = 0.0;
    std::vector<CvRow> table;
};

/// Contiguous-block K-fold cross-validation over the window rows (blocks
/// respect the serial dependence of weekly data). folds == N is leave-one-out;
/// otherwise every fold must have at least 2 rows. Ties prefer the larger
/// lambda.
CvResult cross_validate(const DesignWindow& window, const PenaltySpec& base, int folds,
                        const std::vector<double>& path, const FitOptions& opts = {});

}  // namespace argoc
