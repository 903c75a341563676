#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "argoc/design.hpp"
#include "argoc/panel.hpp"
#include "argoc/sgl.hpp"

namespace argoc {

enum class MethodKind { argo_c, argo_lasso, naive, var1, exo_only_argo_c };

std::string method_name(MethodKind kind);
MethodKind parse_method(const std::string& name);

struct MethodSpec {
    MethodKind kind = MethodKind::argo_c;
    int m = 52;            // lagged-target terms (ignored for exo_only kinds)
    int N = 104;           // rolling training window
    double alpha = 0.95;
    int folds = 10;
    int n_lambda = 50;
    double lambda_ratio = 1e-3;
    double tol = 1e-7;
    double cv_tol = 1e-5;  // fold-fit tolerance; held-out errors need less precision
    int max_iter = 10000;
    int cv_every = 1;      // lambda re-selection cadence in weeks
    std::string label;     // defaults to the kind name

    std::string name() const { return label.empty() ? method_name(kind) : label; }
};

/// Partition of term names into groups 1..K (one vocabulary vintage).
struct TermPartition {
    std::vector<std::string> terms;
    std::vector<int> group_ids;

    int K() const;
    /// Group index sets over `columns` of `panel` (panel column subset, in
    /// order); throws if a column's term is not covered.
    std::vector<std::vector<int>> groups_over(const WeeklyPanel& panel,
                                              const std::vector<int>& columns) const;
};

/// Vintage-dated partitions; the entry in force at week w is the latest one
/// effective at or before w.
struct PartitionSchedule {
    struct Entry {
        WeekStamp effective_from;
        TermPartition partition;
    };
    std::vector<Entry> entries;  // ascending by effective_from

    const TermPartition& active_at(WeekStamp w) const;
};

struct WeekRecord {
    WeekStamp week{};
    double prediction_pct = 0.0;
    double prediction_logit = 0.0;
    double lambda = 0.0;
    std::vector<std::uint8_t> selected;  // ar lags, then active terms in panel order
    std::vector<int> active_terms;       // panel columns behind the term part of `selected`
    Eigen::VectorXd residuals_logit;     // training residuals for the week's window
};

struct NowcastRun {
    std::string method;
    int m = 0;
    std::vector<WeekRecord> weeks;
    std::vector<std::pair<WeekStamp, std::string>> skipped;  // no prediction made
    std::vector<std::pair<WeekStamp, std::string>> flags;    // predicted, with a caveat
    std::uint64_t seed = 0;
    std::string config_hash;
};

/// Rolling SGL nowcast over [begin, end]: per week the window is built with
/// the week's usable vocabulary, lambda is cross-validated (at the cadence in
/// `spec`), the model fit and the current week predicted. Target values at or
/// after the prediction week and predictor values after it are never touched.
/// argo_lasso runs the same loop with singleton groups; exo_only drops the lag
/// block as the regional raw-estimate step does.
NowcastRun nowcast_argo_c(const WeeklyPanel& transformed, const AvailabilityTable& availability,
                          const PartitionSchedule& partitions, WeekStamp begin, WeekStamp end,
                          const MethodSpec& spec, int jobs = 1);

/// prediction(T) = target(T-1), percent scale.
NowcastRun nowcast_naive(const WeeklyPanel& panel, WeekStamp begin, WeekStamp end);

struct MultiTargetSeries {
    std::vector<WeekStamp> weeks;
    std::vector<std::string> names;
    Eigen::MatrixXd values_logit;  // weeks x series
};

/// Rolling least-squares VAR(1) on the logit scale, one run per series.
/// Rank-deficient windows fall back to the pseudo-inverse solution and are
/// flagged in `skipped`-style notes on the first run.
std::vector<NowcastRun> nowcast_var1(const MultiTargetSeries& targets, WeekStamp begin,
                                     WeekStamp end, int N);

/// Week-by-predictor inclusion matrix for the weeks whose vocabulary matches
/// `partition`, columns ordered lag block first, then terms banded by group.
struct TraceplotMatrix {
    std::vector<WeekStamp> weeks;
    std::vector<std::string> columns;
    std::vector<int> column_group;  // 0 for lag columns, else group id
    std::vector<std::vector<std::uint8_t>> included;
};

TraceplotMatrix extract_traceplot(const NowcastRun& run, const WeeklyPanel& panel,
                                  const TermPartition& partition);

}  // namespace argoc
