#include "argoc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace argoc {

DistanceMatrix correlation_distance(const Eigen::MatrixXd& series) {
    const Eigen::Index n = series.cols();
    const Eigen::Index len = series.rows();
    if (len < 3) throw std::invalid_argument("correlation_distance: need at least 3 rows");
    if (n < 1) throw std::invalid_argument("correlation_distance: need at least 1 series");

    Eigen::MatrixXd centered = series.rowwise() - series.colwise().mean();
    Eigen::VectorXd norms(n);
    DistanceMatrix out;
    out.d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        norms[j] = centered.col(j).norm();
        if (!(norms[j] > 0.0)) out.constant_series.push_back(static_cast<int>(j));
    }
    std::vector<char> is_const(n, 0);
    for (int j : out.constant_series) is_const[j] = 1;

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double dist;
            if (is_const[i] || is_const[j]) {
                dist = 1.0;  // correlation undefined; treat as uncorrelated
            } else {
                const double rho = centered.col(i).dot(centered.col(j)) / (norms[i] * norms[j]);
                dist = std::clamp(1.0 - rho, 0.0, 2.0);
            }
            out.d(i, j) = dist;
            out.d(j, i) = dist;
        }
    }
    return out;
}

namespace {

// Canonical pair key for tie-breaking: clusters compare by their smallest
// original member index.
struct PairKey {
    int lo, hi;
    bool operator<(const PairKey& o) const {
        return lo != o.lo ? lo < o.lo : hi < o.hi;
    }
};

std::vector<int> merged_members(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

Dendrogram average_linkage_tree(const DistanceMatrix& dm) {
    const int n = dm.n();
    Dendrogram tree;
    tree.n = n;
    if (n <= 1) return tree;

    Eigen::MatrixXd d = dm.d;  // average inter-cluster distance, Lance-Williams updated
    std::vector<std::vector<int>> members(n);
    std::vector<char> active(n, 1);
    std::vector<double> size(n);
    for (int i = 0; i < n; ++i) {
        members[i] = {i};
        size[i] = 1.0;
    }

    double last_height = -std::numeric_limits<double>::infinity();
    for (int step = 0; step < n - 1; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        PairKey best_key{-1, -1};
        for (int i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double dij = d(i, j);
                if (dij > best) continue;
                const int ri = members[i].front();
                const int rj = members[j].front();
                PairKey key{std::min(ri, rj), std::max(ri, rj)};
                if (dij < best || (dij == best && key < best_key)) {
                    best = dij;
                    bi = i;
                    bj = j;
                    best_key = key;
                }
            }
        }

        MergeRecord rec;
        // Left side carries the smaller smallest member.
        const bool left_is_bi = members[bi].front() < members[bj].front();
        rec.left = left_is_bi ? members[bi] : members[bj];
        rec.right = left_is_bi ? members[bj] : members[bi];
        rec.height = best;
        if (best < last_height) tree.monotone = false;
        last_height = best;
        tree.merges.push_back(std::move(rec));

        // Merge bj into bi.
        const double si = size[bi], sj = size[bj];
        for (int k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double updated = (si * d(bi, k) + sj * d(bj, k)) / (si + sj);
            d(bi, k) = updated;
            d(k, bi) = updated;
        }
        members[bi] = merged_members(members[bi], members[bj]);
        size[bi] = si + sj;
        active[bj] = 0;
    }
    return tree;
}

std::vector<std::vector<int>> ClusterPartition::groups() const {
    std::vector<std::vector<int>> out(K);
    for (int i = 0; i < static_cast<int>(assignments.size()); ++i)
        out[assignments[i] - 1].push_back(i);
    return out;
}

ClusterPartition cut_tree(const Dendrogram& tree, int K) {
    const int n = tree.n;
    if (K < 1 || K > n) throw std::invalid_argument("cut_tree: K must be in 1..n");

    // Replay the first n-K merges over singleton clusters.
    std::vector<std::vector<int>> clusters(n);
    std::vector<int> owner(n);  // series -> cluster slot
    for (int i = 0; i < n; ++i) {
        clusters[i] = {i};
        owner[i] = i;
    }
    ClusterPartition part;
    part.K = K;
    const int n_merges = n - K;
    for (int s = 0; s < n_merges; ++s) {
        const MergeRecord& rec = tree.merges[s];
        const int a = owner[rec.left.front()];
        const int b = owner[rec.right.front()];
        clusters[a] = merged_members(clusters[a], clusters[b]);
        for (int m : clusters[b]) owner[m] = a;
        clusters[b].clear();
        part.merge_log.push_back(rec);
    }

    // Group ids 1..K ordered by smallest member.
    std::vector<const std::vector<int>*> live;
    for (const auto& c : clusters)
        if (!c.empty()) live.push_back(&c);
    std::sort(live.begin(), live.end(),
              [](const auto* a, const auto* b) { return a->front() < b->front(); });

    part.assignments.assign(n, 0);
    part.group_sizes.resize(K);
    for (int g = 0; g < K; ++g) {
        part.group_sizes[g] = static_cast<int>(live[g]->size());
        for (int m : *live[g]) part.assignments[m] = g + 1;
    }
    return part;
}

ClusterPartition average_linkage(const DistanceMatrix& d, int K) {
    return cut_tree(average_linkage_tree(d), K);
}

double within_group_variance(const ClusterPartition& partition, const DistanceMatrix& dm) {
    // Summed squared pairwise distances inside each group; refining a
    // partition can only drop pairs, so the total is nonincreasing in K.
    double total = 0.0;
    for (const auto& g : partition.groups()) {
        const std::size_t sz = g.size();
        if (sz < 2) continue;
        for (std::size_t a = 0; a < sz; ++a)
            for (std::size_t b = a + 1; b < sz; ++b) {
                const double dist = dm.d(g[a], g[b]);
                total += dist * dist;
            }
    }
    return total;
}

double silhouette_score(const ClusterPartition& partition, const DistanceMatrix& dm) {
    const int n = dm.n();
    const int K = partition.K;
    if (K < 2 || K > n - 1)
        throw std::invalid_argument("silhouette_score: requires 2 <= K <= n-1");

    const auto groups = partition.groups();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const int gi = partition.assignments[i] - 1;
        if (groups[gi].size() == 1) continue;  // singleton scores 0

        double a = 0.0;
        for (int m : groups[gi])
            if (m != i) a += dm.d(i, m);
        a /= static_cast<double>(groups[gi].size() - 1);

        double b = std::numeric_limits<double>::infinity();
        for (int g = 0; g < K; ++g) {
            if (g == gi) continue;
            double mean = 0.0;
            for (int m : groups[g]) mean += dm.d(i, m);
            mean /= static_cast<double>(groups[g].size());
            b = std::min(b, mean);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

std::vector<ClusterScanRow> scan_cluster_counts(const DistanceMatrix& d, int k_min, int k_max) {
    const int n = d.n();
    if (k_min < 1 || k_min > k_max || k_max > n)
        throw std::invalid_argument("scan_cluster_counts: need 1 <= k_min <= k_max <= n");
    const Dendrogram tree = average_linkage_tree(d);
    std::vector<ClusterScanRow> rows;
    rows.reserve(k_max - k_min + 1);
    for (int K = k_min; K <= k_max; ++K) {
        const ClusterPartition part = cut_tree(tree, K);
        ClusterScanRow row;
        row.K = K;
        row.within_var = within_group_variance(part, d);
        row.silhouette = (K >= 2 && K <= n - 1) ? silhouette_score(part, d)
                                                : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace argoc
