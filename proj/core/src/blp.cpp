#include "argoc/blp.hpp"

#include <Eigen/Cholesky>

namespace argoc {

Eigen::VectorXd BoostInputs::features_at(Eigen::Index row) const {
    const Eigen::Index R = n_regions();
    Eigen::VectorXd f(n_features());
    f.head(R) = raw_regional.row(row);
    f(R) = national(row);
    f.tail(R) = lagged_truth.row(row);
    return f;
}

BlpModel fit_blp(const BoostInputs& inputs, Eigen::Index train_begin, Eigen::Index train_end,
                 double shrinkage) {
    const Eigen::Index R = inputs.n_regions();
    const Eigen::Index F = inputs.n_features();
    const Eigen::Index n = train_end - train_begin;
    if (n < 2 * F)
        throw std::invalid_argument("fit_blp: training span must cover at least 2x the feature dimension");
    if (!(shrinkage >= 0.0 && shrinkage <= 1.0))
        throw std::invalid_argument("fit_blp: shrinkage weight must lie in [0, 1]");

    Eigen::MatrixXd feats(n, F);
    Eigen::MatrixXd targs(n, R);
    for (Eigen::Index i = 0; i < n; ++i) {
        feats.row(i) = inputs.features_at(train_begin + i);
        targs.row(i) = inputs.truth.row(train_begin + i);
    }

    BlpModel model;
    model.shrinkage = shrinkage;
    model.mean_features = feats.colwise().mean();
    model.mean_target = targs.colwise().mean();

    const Eigen::MatrixXd fc = feats.rowwise() - model.mean_features.transpose();
    const Eigen::MatrixXd tc = targs.rowwise() - model.mean_target.transpose();
    const double denom = static_cast<double>(n - 1);
    Eigen::MatrixXd cov_ff = fc.transpose() * fc / denom;
    const Eigen::MatrixXd cov_yf = tc.transpose() * fc / denom;  // R x F

    cov_ff = (1.0 - shrinkage) * cov_ff +
             shrinkage * Eigen::MatrixXd(cov_ff.diagonal().asDiagonal());

    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov_ff);
    const double dmax = cov_ff.diagonal().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-12 * std::max(dmax, 1e-300))
        throw IncreaseShrinkage("feature covariance is singular after shrinkage");

    model.coef = ldlt.solve(cov_yf.transpose()).transpose();  // R x F
    return model;
}

Eigen::VectorXd boost_predict(const BlpModel& model, const Eigen::VectorXd& features) {
    return model.mean_target + model.coef * (features - model.mean_features);
}

}  // namespace argoc
