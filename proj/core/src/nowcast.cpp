#include "argoc/nowcast.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "parallel.hpp"

namespace argoc {

std::string method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::argo_c: return "argo_c";
        case MethodKind::argo_lasso: return "argo";
        case MethodKind::naive: return "naive";
        case MethodKind::var1: return "var1";
        case MethodKind::exo_only_argo_c: return "argo_c_exo";
    }
    return "?";
}

MethodKind parse_method(const std::string& name) {
    if (name == "argo_c") return MethodKind::argo_c;
    if (name == "argo" || name == "argo_lasso") return MethodKind::argo_lasso;
    if (name == "naive") return MethodKind::naive;
    if (name == "var1") return MethodKind::var1;
    if (name == "argo_c_exo" || name == "exo_only_argo_c") return MethodKind::exo_only_argo_c;
    throw std::invalid_argument("unknown method '" + name + "'");
}

int TermPartition::K() const {
    int k = 0;
    for (int g : group_ids) k = std::max(k, g);
    return k;
}

std::vector<std::vector<int>> TermPartition::groups_over(const WeeklyPanel& panel,
                                                         const std::vector<int>& columns) const {
    std::unordered_map<std::string, int> gid;
    for (std::size_t i = 0; i < terms.size(); ++i) gid[terms[i]] = group_ids[i];

    std::map<int, std::vector<int>> by_group;  // group id -> positions within `columns`
    for (std::size_t pos = 0; pos < columns.size(); ++pos) {
        const std::string& term = panel.terms[columns[pos]];
        auto it = gid.find(term);
        if (it == gid.end())
            throw std::invalid_argument("partition does not cover term '" + term + "'");
        by_group[it->second].push_back(static_cast<int>(pos));
    }
    std::vector<std::vector<int>> out;
    out.reserve(by_group.size());
    for (auto& [g, members] : by_group) out.push_back(std::move(members));
    return out;
}

const TermPartition& PartitionSchedule::active_at(WeekStamp w) const {
    const TermPartition* active = nullptr;
    for (const auto& e : entries) {
        if (e.effective_from <= w) active = &e.partition;
    }
    if (!active) throw std::invalid_argument("no partition effective at " + format_week(w));
    return *active;
}

namespace {

std::vector<WeekStamp> clip_span(const WeeklyPanel& panel, WeekStamp begin, WeekStamp end) {
    std::vector<WeekStamp> out;
    if (end < begin) return out;
    WeekStamp w = std::max(begin, panel.weeks.front());
    const WeekStamp last = std::min(end, panel.weeks.back());
    for (; !(last < w); w = next_week(w)) out.push_back(w);
    return out;
}

struct WeekOutcome {
    bool ok = false;
    WeekRecord rec;
    std::string skip_reason;
};

}  // namespace

NowcastRun nowcast_argo_c(const WeeklyPanel& panel, const AvailabilityTable& availability,
                          const PartitionSchedule& partitions, WeekStamp begin, WeekStamp end,
                          const MethodSpec& spec, int jobs) {
    if (panel.state != TransformState::transformed)
        throw std::invalid_argument("nowcast: panel must be transformed");
    const bool lasso_kind = spec.kind == MethodKind::argo_lasso;
    const bool exo_only = spec.kind == MethodKind::exo_only_argo_c;
    if (!lasso_kind && !exo_only && spec.kind != MethodKind::argo_c)
        throw std::invalid_argument("nowcast_argo_c: unsupported method kind");
    const int m_eff = exo_only ? 0 : spec.m;
    const double alpha = lasso_kind ? 1.0 : spec.alpha;

    NowcastRun run;
    run.method = spec.name();
    run.m = m_eff;

    const std::vector<WeekStamp> span = clip_span(panel, begin, end);
    if (span.empty()) return run;

    // Vintage switch points inside the span; lambda is re-selected there even
    // mid-cadence because the design width changes.
    const std::vector<WeekStamp> vintages = availability.vintages(panel);
    const auto vintage_start = [&](WeekStamp w) {
        WeekStamp s = span.front();
        for (const auto& v : vintages)
            if (v <= w && s < v) s = v;
        return s;
    };
    const auto anchor_of = [&](WeekStamp w) {
        const long idx = week_diff(w, span.front());
        const long k = std::max(1, spec.cv_every);
        WeekStamp cadence = advance_weeks(span.front(), idx - idx % k);
        return std::max(cadence, vintage_start(w));
    };

    FitOptions opts;
    opts.tol = spec.tol;
    opts.max_iter = spec.max_iter;
    FitOptions cv_opts = opts;
    cv_opts.tol = std::max(spec.tol, spec.cv_tol);

    const auto make_penalty = [&](const std::vector<int>& usable, WeekStamp T) {
        PenaltySpec pen;
        pen.alpha = alpha;
        if (lasso_kind)
            pen.groups = PenaltySpec::singleton_groups(static_cast<int>(usable.size()));
        else
            pen.groups = partitions.active_at(T).groups_over(panel, usable);
        return pen;
    };

    // Pass 1: cross-validate lambda at each distinct anchor week.
    std::set<WeekStamp> anchor_set;
    for (const auto& w : span) anchor_set.insert(anchor_of(w));
    const std::vector<WeekStamp> anchors(anchor_set.begin(), anchor_set.end());
    std::vector<double> anchor_lambda(anchors.size(),
                                      std::numeric_limits<double>::quiet_NaN());
    const auto cv_lambda_at = [&](WeekStamp T) {
        const std::vector<int> usable = availability.usable_columns(panel, T);
        if (usable.empty()) throw InsufficientHistory("no usable terms");
        const DesignWindow window = build_design_window(panel, T, spec.N, m_eff, usable);
        const auto [std_window, st] = standardize_columns(window);
        PenaltySpec pen = make_penalty(usable, T);
        const std::vector<double> path =
            lambda_path(std_window, pen, spec.n_lambda, spec.lambda_ratio);
        return cross_validate(std_window, pen, spec.folds, path, cv_opts).lambda_star;
    };
    detail::parallel_for(anchors.size(), jobs, [&](std::size_t i) {
        try {
            anchor_lambda[i] = cv_lambda_at(anchors[i]);
        } catch (const InsufficientHistory&) {
            // left NaN; dependent weeks re-select locally
        }
    });
    std::map<WeekStamp, double> lambda_by_anchor;
    for (std::size_t i = 0; i < anchors.size(); ++i)
        lambda_by_anchor[anchors[i]] = anchor_lambda[i];

    // Pass 2: fit and predict every week.
    std::vector<WeekOutcome> outcomes(span.size());
    detail::parallel_for(span.size(), jobs, [&](std::size_t i) {
        const WeekStamp T = span[i];
        WeekOutcome& out = outcomes[i];
        try {
            const std::vector<int> usable = availability.usable_columns(panel, T);
            if (usable.empty()) {
                out.skip_reason = "no usable terms";
                return;
            }
            double lambda_star = lambda_by_anchor.at(anchor_of(T));
            if (!std::isfinite(lambda_star)) lambda_star = cv_lambda_at(T);

            const DesignWindow window = build_design_window(panel, T, spec.N, m_eff, usable);
            const auto [std_window, st] = standardize_columns(window);
            PenaltySpec pen = make_penalty(usable, T);
            pen.lambda = lambda_star;
            const SglModel model = fit(std_window, pen, opts);

            WeekRecord rec;
            rec.week = T;
            rec.lambda = lambda_star;
            rec.prediction_logit = predict(std_window, model);
            rec.prediction_pct = inverse_logit(rec.prediction_logit);
            rec.active_terms = usable;
            rec.selected.resize(m_eff + usable.size());
            for (int j = 0; j < m_eff; ++j) rec.selected[j] = model.ar_coef[j] != 0.0 ? 1 : 0;
            for (std::size_t c = 0; c < usable.size(); ++c)
                rec.selected[m_eff + c] = model.exo_coef[static_cast<Eigen::Index>(c)] != 0.0 ? 1 : 0;
            rec.residuals_logit = training_residuals(std_window, model);
            out.rec = std::move(rec);
            out.ok = true;
        } catch (const InsufficientHistory& e) {
            out.skip_reason = e.what();
        }
    });

    for (std::size_t i = 0; i < span.size(); ++i) {
        if (outcomes[i].ok)
            run.weeks.push_back(std::move(outcomes[i].rec));
        else
            run.skipped.emplace_back(span[i], outcomes[i].skip_reason);
    }
    return run;
}

NowcastRun nowcast_naive(const WeeklyPanel& panel, WeekStamp begin, WeekStamp end) {
    NowcastRun run;
    run.method = method_name(MethodKind::naive);
    for (const WeekStamp& T : clip_span(panel, begin, end)) {
        const Eigen::Index i = panel.index_of(T);
        if (i < 1 || !panel.target_known(i - 1)) {
            run.skipped.emplace_back(T, "previous week's target unknown");
            continue;
        }
        const double prev = panel.target[i - 1];
        WeekRecord rec;
        rec.week = T;
        rec.prediction_pct =
            panel.state == TransformState::transformed ? inverse_logit(prev) : prev;
        rec.prediction_logit =
            panel.state == TransformState::transformed ? prev : logit(prev);
        run.weeks.push_back(std::move(rec));
    }
    return run;
}

std::vector<NowcastRun> nowcast_var1(const MultiTargetSeries& targets, WeekStamp begin,
                                     WeekStamp end, int N) {
    const Eigen::Index d = targets.values_logit.cols();
    const Eigen::Index n_weeks = targets.values_logit.rows();
    if (d < 1) throw std::invalid_argument("nowcast_var1: need at least one series");
    if (N < static_cast<int>(d) + 2)
        throw std::invalid_argument("nowcast_var1: window too short for the dimension");

    std::vector<NowcastRun> runs(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        runs[j].method = method_name(MethodKind::var1) + ":" + targets.names[j];
    }

    const auto row_known = [&](Eigen::Index r) {
        return r >= 0 && r < n_weeks && targets.values_logit.row(r).array().isFinite().all();
    };

    for (WeekStamp T = begin; !(end < T); T = next_week(T)) {
        const long off = week_diff(T, targets.weeks.front());
        const Eigen::Index t = off;
        bool ok = off >= 0 && t < n_weeks && t - N - 1 >= 0;
        for (Eigen::Index r = t - N - 1; ok && r <= t - 1; ++r) ok = row_known(r);
        if (!ok) {
            for (auto& run : runs) run.skipped.emplace_back(T, "insufficient joint history");
            continue;
        }

        Eigen::MatrixXd W(N, d + 1);
        Eigen::MatrixXd Y(N, d);
        for (Eigen::Index r = 0; r < N; ++r) {
            const Eigen::Index row = t - N + r;
            W(r, 0) = 1.0;
            W.row(r).tail(d) = targets.values_logit.row(row - 1);
            Y.row(r) = targets.values_logit.row(row);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(W);
        const Eigen::MatrixXd B = cod.solve(Y);  // (d+1) x d
        const bool deficient = cod.rank() < d + 1;

        Eigen::RowVectorXd x(d + 1);
        x(0) = 1.0;
        x.tail(d) = targets.values_logit.row(t - 1);
        const Eigen::RowVectorXd pred = x * B;

        for (Eigen::Index j = 0; j < d; ++j) {
            WeekRecord rec;
            rec.week = T;
            rec.prediction_logit = pred[j];
            rec.prediction_pct = inverse_logit(pred[j]);
            runs[j].weeks.push_back(std::move(rec));
            if (deficient) runs[j].flags.emplace_back(T, "rank-deficient window, pseudo-inverse");
        }
    }
    return runs;
}

TraceplotMatrix extract_traceplot(const NowcastRun& run, const WeeklyPanel& panel,
                                  const TermPartition& partition) {
    TraceplotMatrix out;

    std::unordered_map<std::string, int> col_of;
    for (int j = 0; j < static_cast<int>(panel.terms.size()); ++j) col_of[panel.terms[j]] = j;

    // The vocabulary this partition describes, as panel columns in panel order.
    std::vector<int> vocab;
    for (const auto& term : partition.terms) {
        auto it = col_of.find(term);
        if (it == col_of.end())
            throw std::invalid_argument("traceplot: term '" + term + "' not in panel");
        vocab.push_back(it->second);
    }
    std::sort(vocab.begin(), vocab.end());

    // Columns: lags first, then terms banded by group id.
    for (int s = 1; s <= run.m; ++s) {
        out.columns.push_back("ar_" + std::to_string(s));
        out.column_group.push_back(0);
    }
    std::map<int, std::vector<int>> by_group;  // group id -> panel columns
    for (std::size_t i = 0; i < partition.terms.size(); ++i)
        by_group[partition.group_ids[i]].push_back(col_of.at(partition.terms[i]));
    std::vector<int> term_order;  // banded panel columns
    for (auto& [g, cols] : by_group) {
        std::sort(cols.begin(), cols.end());
        for (int c : cols) {
            out.columns.push_back(panel.terms[c]);
            out.column_group.push_back(g);
            term_order.push_back(c);
        }
    }

    for (const auto& rec : run.weeks) {
        if (rec.active_terms != vocab) continue;  // other vintage
        std::unordered_map<int, std::uint8_t> sel;
        for (std::size_t c = 0; c < rec.active_terms.size(); ++c)
            sel[rec.active_terms[c]] = rec.selected[run.m + c];
        std::vector<std::uint8_t> row;
        row.reserve(out.columns.size());
        for (int s = 0; s < run.m; ++s) row.push_back(rec.selected[s]);
        for (int c : term_order) row.push_back(sel.at(c));
        out.weeks.push_back(rec.week);
        out.included.push_back(std::move(row));
    }
    return out;
}

}  // namespace argoc
