#include "argoc/sgl.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace argoc {

std::vector<std::vector<int>> PenaltySpec::singleton_groups(int p) {
    std::vector<std::vector<int>> g(p);
    for (int j = 0; j < p; ++j) g[j] = {j};
    return g;
}

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

namespace {

void check_groups(const PenaltySpec& penalty, Eigen::Index p) {
    std::vector<char> seen(p, 0);
    for (const auto& g : penalty.groups) {
        if (g.empty()) throw std::invalid_argument("sgl: empty group");
        for (int j : g) {
            if (j < 0 || j >= p) throw std::invalid_argument("sgl: group index out of range");
            if (seen[j]) throw std::invalid_argument("sgl: groups must not overlap");
            seen[j] = 1;
        }
    }
    for (Eigen::Index j = 0; j < p; ++j)
        if (!seen[j]) throw std::invalid_argument("sgl: groups must cover every exo column");
    if (!(penalty.alpha >= 0.0 && penalty.alpha <= 1.0))
        throw std::invalid_argument("sgl: alpha must lie in [0, 1]");
    if (!(penalty.lambda >= 0.0) || !std::isfinite(penalty.lambda))
        throw std::invalid_argument("sgl: lambda must be finite and nonnegative");
}

// Per-window precomputation shared across fits (warm-started lambda paths,
// cross-validation folds).
struct Workspace {
    const DesignWindow* window;
    std::vector<Eigen::MatrixXd> Xg;     // group column blocks
    std::vector<Eigen::MatrixXd> gram;   // X_k' X_k
    std::vector<double> sqrt_pk;
    std::vector<double> lipschitz;       // largest eigenvalue of X_k' X_k / N
    Eigen::VectorXd ar_norm2_n;          // ||a_j||^2 / N per lag column
    double n;

    Workspace(const DesignWindow& w, const std::vector<std::vector<int>>& groups) : window(&w) {
        n = static_cast<double>(w.n());
        ar_norm2_n = w.ar_block.colwise().squaredNorm().transpose() / n;
        Xg.reserve(groups.size());
        gram.reserve(groups.size());
        sqrt_pk.reserve(groups.size());
        lipschitz.reserve(groups.size());
        for (const auto& g : groups) {
            Eigen::MatrixXd block(w.n(), g.size());
            for (std::size_t c = 0; c < g.size(); ++c) block.col(c) = w.exo_block.col(g[c]);
            gram.push_back(block.transpose() * block);
            if (g.size() == 1) {
                lipschitz.push_back(gram.back()(0, 0) / n);
            } else {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram.back(),
                                                                   Eigen::EigenvaluesOnly);
                lipschitz.push_back(eig.eigenvalues().maxCoeff() / n);
            }
            Xg.push_back(std::move(block));
            sqrt_pk.push_back(std::sqrt(static_cast<double>(g.size())));
        }
    }
};

// Minimizes the group block (1/2N)||r_k - X theta||^2 + l1 ||theta||_1
// + l2 ||theta||_2 by accelerated proximal gradient with backtracking, in
// Gram space: q = X' r_k, G = X' X (loss terms constant in theta dropped).
// The caller supplies 1/L as the opening step size, so backtracking is a
// safety net. Returns the start point if the block objective did not improve,
// which keeps the outer descent monotone.
Eigen::VectorXd prox_group(const Eigen::MatrixXd& G, const Eigen::VectorXd& q, double n,
                           const Eigen::VectorXd& theta0, double l1, double l2, double t_init,
                           double inner_tol, int max_inner) {
    const auto smooth = [&](const Eigen::VectorXd& th) {
        return (0.5 * th.dot(G * th) - th.dot(q)) / n;
    };
    const auto block_objective = [&](const Eigen::VectorXd& th) {
        return smooth(th) + l1 * th.lpNorm<1>() + l2 * th.norm();
    };
    const auto prox = [&](const Eigen::VectorXd& z, double t) -> Eigen::VectorXd {
        Eigen::VectorXd u = z.unaryExpr([&](double v) { return soft_threshold(v, t * l1); });
        const double nu = u.norm();
        if (nu <= t * l2) return Eigen::VectorXd::Zero(z.size());
        return (1.0 - t * l2 / nu) * u;
    };

    Eigen::VectorXd theta = theta0;
    Eigen::VectorXd look = theta0;  // momentum point
    double moment = 1.0;
    double t = t_init > 0.0 ? t_init : 1.0;
    for (int it = 0; it < max_inner; ++it) {
        const Eigen::VectorXd grad = (G * look - q) / n;
        const double f_look = smooth(look);
        Eigen::VectorXd next;
        while (true) {
            next = prox(look - t * grad, t);
            const Eigen::VectorXd step = next - look;
            const double quad = f_look + grad.dot(step) + step.squaredNorm() / (2.0 * t);
            if (smooth(next) <= quad + 1e-15) break;
            t *= 0.5;
            if (t < 1e-20) break;
        }
        const double delta = (next - theta).cwiseAbs().maxCoeff();
        const double moment_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * moment * moment));
        look = next + ((moment - 1.0) / moment_next) * (next - theta);
        moment = moment_next;
        theta = std::move(next);
        if (delta < inner_tol) break;
    }
    if (block_objective(theta) > block_objective(theta0)) return theta0;
    return theta;
}

SglModel fit_impl(const Workspace& ws, const PenaltySpec& penalty, const SglModel* warm,
                  const FitOptions& opts) {
    const DesignWindow& w = *ws.window;
    const Eigen::Index m = w.m();
    const Eigen::Index p = w.p();
    const double n = ws.n;
    const double alpha = penalty.alpha;
    const double lam = penalty.lambda;
    const double l1 = alpha * lam;

    SglModel model;
    model.penalty = penalty;
    if (warm && warm->ar_coef.size() == m && warm->exo_coef.size() == p) {
        model.intercept = warm->intercept;
        model.ar_coef = warm->ar_coef;
        model.exo_coef = warm->exo_coef;
    } else {
        model.intercept = w.response.mean();
        model.ar_coef = Eigen::VectorXd::Zero(m);
        model.exo_coef = Eigen::VectorXd::Zero(p);
    }

    Eigen::VectorXd r = w.response.array() - model.intercept;
    if (m > 0) r.noalias() -= w.ar_block * model.ar_coef;
    for (std::size_t k = 0; k < penalty.groups.size(); ++k) {
        Eigen::VectorXd bk(penalty.groups[k].size());
        for (std::size_t c = 0; c < penalty.groups[k].size(); ++c)
            bk[c] = model.exo_coef[penalty.groups[k][c]];
        if ((bk.array() != 0.0).any()) r.noalias() -= ws.Xg[k] * bk;
    }

    // One block sweep; with active_only, zero blocks are left untouched.
    const auto sweep = [&](bool active_only) {
        double max_delta = 0.0;

        // Unpenalized intercept: exact update is the residual mean.
        const double d = r.mean();
        model.intercept += d;
        r.array() -= d;
        max_delta = std::max(max_delta, std::abs(d));

        // Lag block: exact soft-thresholded coordinate updates.
        for (Eigen::Index j = 0; j < m; ++j) {
            const double cj = ws.ar_norm2_n[j];
            if (!(cj > 0.0)) continue;  // constant column stays at zero
            const double old = model.ar_coef[j];
            if (active_only && old == 0.0) continue;
            const double z = w.ar_block.col(j).dot(r) / n + cj * old;
            const double updated = soft_threshold(z, l1) / cj;
            if (updated != old) {
                r.noalias() -= (updated - old) * w.ar_block.col(j);
                model.ar_coef[j] = updated;
                max_delta = std::max(max_delta, std::abs(updated - old));
            }
        }

        // Exogenous groups.
        for (std::size_t k = 0; k < penalty.groups.size(); ++k) {
            const auto& cols = penalty.groups[k];
            const Eigen::Index pk = static_cast<Eigen::Index>(cols.size());
            const double l2 = (1.0 - alpha) * lam * ws.sqrt_pk[k];

            Eigen::VectorXd bk(pk);
            for (Eigen::Index c = 0; c < pk; ++c) bk[c] = model.exo_coef[cols[c]];
            const bool was_nonzero = (bk.array() != 0.0).any();
            if (active_only && !was_nonzero) continue;
            if (was_nonzero) r.noalias() += ws.Xg[k] * bk;  // residual excluding group k

            const Eigen::VectorXd q = ws.Xg[k].transpose() * r;  // X_k' r_k
            Eigen::VectorXd zk = q / n;

            double norm_soft = 0.0;
            for (Eigen::Index c = 0; c < pk; ++c) {
                const double s = soft_threshold(zk[c], l1);
                norm_soft += s * s;
            }
            norm_soft = std::sqrt(norm_soft);

            Eigen::VectorXd updated;
            if (norm_soft <= l2) {
                updated = Eigen::VectorXd::Zero(pk);
            } else if (pk == 1) {
                // Singleton group: the combined penalty is (l1 + l2)|theta|,
                // so the coordinate update is closed-form.
                const double c0 = ws.gram[k](0, 0) / n;
                updated.resize(1);
                updated[0] = c0 > 0.0 ? soft_threshold(zk[0], l1 + l2) / c0 : 0.0;
            } else {
                const double t_init = ws.lipschitz[k] > 0.0 ? 1.0 / ws.lipschitz[k] : 1.0;
                updated = prox_group(ws.gram[k], q, n, bk, l1, l2, t_init, opts.tol / 10.0, 1000);
            }

            double delta = 0.0;
            for (Eigen::Index c = 0; c < pk; ++c)
                delta = std::max(delta, std::abs(updated[c] - bk[c]));
            if ((updated.array() != 0.0).any()) r.noalias() -= ws.Xg[k] * updated;
            for (Eigen::Index c = 0; c < pk; ++c) model.exo_coef[cols[c]] = updated[c];
            max_delta = std::max(max_delta, delta);
        }

        if (opts.objective_trace)
            opts.objective_trace->push_back(
                objective(w, model.intercept, model.ar_coef, model.exo_coef, penalty));
        return max_delta;
    };

    // Full sweeps decide convergence; between them, cheap sweeps over the
    // currently-active blocks do the bulk of the descent.
    bool converged = false;
    int iter = 0;
    while (iter < opts.max_iter) {
        ++iter;
        if (sweep(false) < opts.tol) {
            converged = true;
            break;
        }
        while (iter < opts.max_iter) {
            ++iter;
            if (sweep(true) < opts.tol) break;
        }
    }

    model.n_iterations = iter;
    model.objective_value = objective(w, model.intercept, model.ar_coef, model.exo_coef, penalty);
    model.kkt_residual = kkt_residual(w, model);
    model.converged = converged && model.kkt_residual <= opts.kkt_tol;
    return model;
}

}  // namespace

double objective(const DesignWindow& window, double intercept, const Eigen::VectorXd& ar_coef,
                 const Eigen::VectorXd& exo_coef, const PenaltySpec& penalty) {
    const double n = static_cast<double>(window.n());
    Eigen::VectorXd r = window.response.array() - intercept;
    if (window.m() > 0) r.noalias() -= window.ar_block * ar_coef;
    if (window.p() > 0) r.noalias() -= window.exo_block * exo_coef;
    double value = r.squaredNorm() / (2.0 * n);
    value += penalty.alpha * penalty.lambda * (ar_coef.lpNorm<1>() + exo_coef.lpNorm<1>());
    for (const auto& g : penalty.groups) {
        double ss = 0.0;
        for (int j : g) ss += exo_coef[j] * exo_coef[j];
        value += (1.0 - penalty.alpha) * penalty.lambda *
                 std::sqrt(static_cast<double>(g.size())) * std::sqrt(ss);
    }
    return value;
}

bool group_is_zero(const DesignWindow& window, const Eigen::VectorXd& residual_excluding_group,
                   int group, const PenaltySpec& penalty) {
    check_groups(penalty, window.p());
    const auto& cols = penalty.groups.at(group);
    const double n = static_cast<double>(window.n());
    double norm_soft = 0.0;
    for (int j : cols) {
        const double z = window.exo_block.col(j).dot(residual_excluding_group) / n;
        const double s = soft_threshold(z, penalty.alpha * penalty.lambda);
        norm_soft += s * s;
    }
    return std::sqrt(norm_soft) <=
           (1.0 - penalty.alpha) * penalty.lambda * std::sqrt(static_cast<double>(cols.size()));
}

SglModel fit(const DesignWindow& window, const PenaltySpec& penalty, const FitOptions& opts) {
    check_groups(penalty, window.p());
    Workspace ws(window, penalty.groups);
    return fit_impl(ws, penalty, nullptr, opts);
}

SglModel fit_warm(const DesignWindow& window, const PenaltySpec& penalty, const SglModel& warm,
                  const FitOptions& opts) {
    check_groups(penalty, window.p());
    Workspace ws(window, penalty.groups);
    return fit_impl(ws, penalty, &warm, opts);
}

std::vector<SglModel> fit_path(const DesignWindow& window, const PenaltySpec& base,
                               const std::vector<double>& path, const FitOptions& opts) {
    check_groups(base, window.p());
    Workspace ws(window, base.groups);
    std::vector<SglModel> models;
    models.reserve(path.size());
    const SglModel* warm = nullptr;
    for (double lam : path) {
        PenaltySpec pen = base;
        pen.lambda = lam;
        models.push_back(fit_impl(ws, pen, warm, opts));
        warm = &models.back();
    }
    return models;
}

double kkt_residual(const DesignWindow& window, const SglModel& model) {
    const double n = static_cast<double>(window.n());
    const double alpha = model.penalty.alpha;
    const double lam = model.penalty.lambda;
    const double l1 = alpha * lam;

    Eigen::VectorXd r = window.response.array() - model.intercept;
    if (window.m() > 0) r.noalias() -= window.ar_block * model.ar_coef;
    if (window.p() > 0) r.noalias() -= window.exo_block * model.exo_coef;

    double viol = std::abs(r.mean());

    for (Eigen::Index j = 0; j < window.m(); ++j) {
        const double z = window.ar_block.col(j).dot(r) / n;
        const double g = model.ar_coef[j];
        if (g == 0.0)
            viol = std::max(viol, std::max(0.0, std::abs(z) - l1));
        else
            viol = std::max(viol, std::abs(z - l1 * (g > 0 ? 1.0 : -1.0)));
    }

    for (const auto& cols : model.penalty.groups) {
        const double sqrt_pk = std::sqrt(static_cast<double>(cols.size()));
        const double l2 = (1.0 - alpha) * lam * sqrt_pk;
        double group_norm = 0.0;
        for (int j : cols) group_norm += model.exo_coef[j] * model.exo_coef[j];
        group_norm = std::sqrt(group_norm);

        if (group_norm == 0.0) {
            double norm_soft = 0.0;
            for (int j : cols) {
                const double z = window.exo_block.col(j).dot(r) / n;
                const double s = soft_threshold(z, l1);
                norm_soft += s * s;
            }
            viol = std::max(viol, std::max(0.0, std::sqrt(norm_soft) - l2));
        } else {
            for (int j : cols) {
                const double z = window.exo_block.col(j).dot(r) / n;
                const double b = model.exo_coef[j];
                if (b == 0.0)
                    viol = std::max(viol, std::max(0.0, std::abs(z) - l1));
                else
                    viol = std::max(viol,
                                    std::abs(z - l1 * (b > 0 ? 1.0 : -1.0) - l2 * b / group_norm));
            }
        }
    }
    return viol;
}

double predict(const DesignWindow& window, const SglModel& model) {
    double y = model.intercept;
    if (window.m() > 0) y += window.pred_ar.dot(model.ar_coef);
    if (window.p() > 0) y += window.pred_exo.dot(model.exo_coef);
    return y;
}

Eigen::VectorXd training_residuals(const DesignWindow& window, const SglModel& model) {
    Eigen::VectorXd r = window.response.array() - model.intercept;
    if (window.m() > 0) r.noalias() -= window.ar_block * model.ar_coef;
    if (window.p() > 0) r.noalias() -= window.exo_block * model.exo_coef;
    return r;
}

double lambda_max(const DesignWindow& window, const PenaltySpec& base) {
    check_groups(base, window.p());
    const double n = static_cast<double>(window.n());
    const double alpha = base.alpha;
    const Eigen::VectorXd r0 = window.response.array() - window.response.mean();

    double lmax = 0.0;
    if (alpha > 0.0) {
        for (Eigen::Index j = 0; j < window.m(); ++j)
            lmax = std::max(lmax, std::abs(window.ar_block.col(j).dot(r0) / n) / alpha);
    }

    for (const auto& cols : base.groups) {
        Eigen::VectorXd zk(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            zk[c] = window.exo_block.col(cols[c]).dot(r0) / n;
        const double sqrt_pk = std::sqrt(static_cast<double>(cols.size()));
        const double zmax = zk.cwiseAbs().maxCoeff();
        if (zmax == 0.0) continue;

        double lk;
        if (alpha >= 1.0) {
            lk = zmax;
        } else if (alpha <= 0.0) {
            lk = zk.norm() / sqrt_pk;
        } else {
            // Smallest lambda with ||S(zk, alpha*lambda)|| <= (1-alpha)*lambda*sqrt_pk.
            // The left side falls and the right side grows in lambda: bisect.
            double lo = 0.0, hi = zmax / alpha;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                double ns = 0.0;
                for (Eigen::Index c = 0; c < zk.size(); ++c) {
                    const double s = soft_threshold(zk[c], alpha * mid);
                    ns += s * s;
                }
                if (std::sqrt(ns) <= (1.0 - alpha) * mid * sqrt_pk)
                    hi = mid;
                else
                    lo = mid;
                if (hi - lo <= 1e-14 * hi) break;
            }
            lk = hi;
        }
        lmax = std::max(lmax, lk);
    }
    return std::max(lmax, 1e-12);
}

std::vector<double> lambda_path(const DesignWindow& window, const PenaltySpec& base, int n_lambda,
                                double ratio) {
    if (n_lambda < 2) throw std::invalid_argument("lambda_path: need n_lambda >= 2");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("lambda_path: ratio must lie in (0, 1)");
    const double lmax = lambda_max(window, base);
    std::vector<double> path(n_lambda);
    const double step = std::log(ratio) / static_cast<double>(n_lambda - 1);
    for (int i = 0; i < n_lambda; ++i) path[i] = lmax * std::exp(step * i);
    return path;
}

CvResult cross_validate(const DesignWindow& window, const PenaltySpec& base, int folds,
                        const std::vector<double>& path, const FitOptions& opts) {
    check_groups(base, window.p());
    const Eigen::Index N = window.n();
    if (folds < 2) throw std::invalid_argument("cross_validate: need folds >= 2");
    if (folds > N) throw std::invalid_argument("cross_validate: more folds than rows");
    if (path.empty()) throw std::invalid_argument("cross_validate: empty lambda path");

    // Contiguous blocks; sizes differ by at most one.
    std::vector<Eigen::Index> starts(folds + 1);
    for (int f = 0; f <= folds; ++f) starts[f] = (N * f) / folds;
    if (folds < N) {
        for (int f = 0; f < folds; ++f)
            if (starts[f + 1] - starts[f] < 2)
                throw std::invalid_argument("cross_validate: degenerate fold with < 2 rows");
    }

    const Eigen::Index n_lam = static_cast<Eigen::Index>(path.size());
    Eigen::MatrixXd fold_mse(folds, n_lam);

    for (int f = 0; f < folds; ++f) {
        const Eigen::Index lo = starts[f], hi = starts[f + 1];
        const Eigen::Index held = hi - lo;
        const Eigen::Index n_train = N - held;

        DesignWindow train;
        train.response.resize(n_train);
        train.ar_block.resize(n_train, window.m());
        train.exo_block.resize(n_train, window.p());
        train.pred_ar = window.pred_ar;
        train.pred_exo = window.pred_exo;
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < N; ++i) {
            if (i >= lo && i < hi) continue;
            train.response[r] = window.response[i];
            train.ar_block.row(r) = window.ar_block.row(i);
            train.exo_block.row(r) = window.exo_block.row(i);
            ++r;
        }

        Workspace ws(train, base.groups);
        SglModel prev;
        bool have_prev = false;
        for (Eigen::Index li = 0; li < n_lam; ++li) {
            PenaltySpec pen = base;
            pen.lambda = path[li];
            const SglModel model = fit_impl(ws, pen, have_prev ? &prev : nullptr, opts);
            double sse = 0.0;
            for (Eigen::Index i = lo; i < hi; ++i) {
                double yhat = model.intercept;
                if (window.m() > 0) yhat += window.ar_block.row(i).dot(model.ar_coef);
                if (window.p() > 0) yhat += window.exo_block.row(i).dot(model.exo_coef);
                const double e = window.response[i] - yhat;
                sse += e * e;
            }
            fold_mse(f, li) = sse / static_cast<double>(held);
            prev = model;
            have_prev = true;
        }
    }

    CvResult out;
    out.table.resize(n_lam);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index li = 0; li < n_lam; ++li) {
        double weighted = 0.0;
        for (int f = 0; f < folds; ++f)
            weighted += fold_mse(f, li) * static_cast<double>(starts[f + 1] - starts[f]);
        const double mean = weighted / static_cast<double>(N);
        const double fold_mean = fold_mse.col(li).mean();
        const double var = (fold_mse.col(li).array() - fold_mean).square().sum() /
                           std::max<double>(1, folds - 1);
        out.table[li] = {path[li], mean, std::sqrt(var / folds)};
        if (mean < best) {  // strict: ties keep the earlier (larger) lambda
            best = mean;
            out.lambda_star = path[li];
        }
    }
    return out;
}

}  // namespace argoc
