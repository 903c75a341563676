#include "argoc/design.hpp"

#include <cmath>
#include <numeric>

namespace argoc {

DesignWindow build_design_window(const WeeklyPanel& panel, WeekStamp T, int N, int m,
                                 const std::vector<int>& exo_columns) {
    if (panel.state != TransformState::transformed)
        throw std::invalid_argument("build_design_window: panel must be transformed");
    if (N < 1 || m < 0) throw std::invalid_argument("build_design_window: need N >= 1, m >= 0");

    const Eigen::Index row_T = panel.index_of(T);
    if (row_T < 0)
        throw InsufficientHistory("week " + format_week(T) + " is outside the panel");

    // Need target values for weeks T-N-m .. T-1 and predictors through T.
    const Eigen::Index first_needed = row_T - N - m;
    if (first_needed < 0)
        throw InsufficientHistory("window at " + format_week(T) + " needs " +
                                  std::to_string(N + m) + " preceding target weeks");
    for (Eigen::Index i = first_needed; i < row_T; ++i)
        if (!panel.target_known(i))
            throw InsufficientHistory("target missing at " + format_week(panel.weeks[i]));

    std::vector<int> cols = exo_columns;
    if (cols.empty()) {
        cols.resize(panel.n_terms());
        std::iota(cols.begin(), cols.end(), 0);
    }
    for (int c : cols)
        if (c < 0 || c >= panel.n_terms())
            throw std::invalid_argument("build_design_window: predictor column out of range");

    const Eigen::Index p = static_cast<Eigen::Index>(cols.size());
    DesignWindow w;
    w.target_week = T;
    w.first_response_week = panel.weeks[row_T - N];
    w.exo_columns = cols;
    w.response.resize(N);
    w.ar_block.resize(N, m);
    w.exo_block.resize(N, p);
    w.pred_ar.resize(m);
    w.pred_exo.resize(p);

    for (Eigen::Index r = 0; r < N; ++r) {
        const Eigen::Index t = row_T - N + r;  // response week row
        w.response[r] = panel.target[t];
        for (int s = 1; s <= m; ++s) w.ar_block(r, s - 1) = panel.target[t - s];
        for (Eigen::Index j = 0; j < p; ++j) w.exo_block(r, j) = panel.predictors(t, cols[j]);
    }
    for (int s = 1; s <= m; ++s) w.pred_ar[s - 1] = panel.target[row_T - s];
    for (Eigen::Index j = 0; j < p; ++j) w.pred_exo[j] = panel.predictors(row_T, cols[j]);
    return w;
}

namespace {

void standardize_block(Eigen::MatrixXd& block, Eigen::VectorXd& pred_row,
                       Eigen::VectorXd& center, Eigen::VectorXd& scale,
                       std::vector<std::uint8_t>& constant, Eigen::Index offset) {
    const Eigen::Index n = block.rows();
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
        const double mu = block.col(j).mean();
        const double ss = (block.col(j).array() - mu).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        const bool is_const = !(sd > 0.0);
        const double s = is_const ? 1.0 : sd;
        center[offset + j] = mu;
        scale[offset + j] = s;
        constant[offset + j] = is_const ? 1 : 0;
        block.col(j) = (block.col(j).array() - mu) / s;
        pred_row[j] = (pred_row[j] - mu) / s;
    }
}

}  // namespace

std::pair<DesignWindow, Standardization> standardize_columns(const DesignWindow& window) {
    if (window.n() < 2)
        throw std::invalid_argument("standardize_columns: need at least 2 rows");
    DesignWindow out = window;
    Standardization st;
    const Eigen::Index total = window.m() + window.p();
    st.center.resize(total);
    st.scale.resize(total);
    st.constant.assign(static_cast<std::size_t>(total), 0);
    standardize_block(out.ar_block, out.pred_ar, st.center, st.scale, st.constant, 0);
    standardize_block(out.exo_block, out.pred_exo, st.center, st.scale, st.constant, window.m());
    return {std::move(out), std::move(st)};
}

}  // namespace argoc
