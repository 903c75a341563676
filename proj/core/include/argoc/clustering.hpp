#pragma once

#include <Eigen/Core>
#include <vector>

namespace argoc {

/// Pairwise correlation distances 1 - rho, symmetric with zero diagonal,
/// entries in [0, 2]. Constant series have undefined correlation; they get
/// distance 1 to every other series and are listed in `constant_series`.
struct DistanceMatrix {
    Eigen::MatrixXd d;
    std::vector<int> constant_series;

    int n() const { return static_cast<int>(d.rows()); }
};

/// `series` has one column per predictor over the clustering date range (rows).
DistanceMatrix correlation_distance(const Eigen::MatrixXd& series);

struct MergeRecord {
    std::vector<int> left;   // member indices, ascending
    std::vector<int> right;
    double height = 0.0;
};

/// Full average-linkage (UPGMA) agglomeration: n-1 merges, heights
/// nondecreasing. Ties are broken by the smallest member index of the merged
/// pair, then by the other side's smallest member, so the tree is a pure
/// function of the distance values.
struct Dendrogram {
    int n = 0;
    std::vector<MergeRecord> merges;
    bool monotone = true;  // average linkage should never violate this
};

Dendrogram average_linkage_tree(const DistanceMatrix& d);

struct ClusterPartition {
    std::vector<int> assignments;  // series index -> group id in 1..K
    int K = 0;
    std::vector<MergeRecord> merge_log;  // merges applied to reach K groups
    std::vector<int> group_sizes;        // group_sizes[g-1] = |group g|

    /// Members per group, groups ordered by smallest member index.
    std::vector<std::vector<int>> groups() const;
};

/// Partition obtained by stopping the agglomeration at K clusters. Cutting at
/// K then K+1 yields a refinement: every K+1 group is inside some K group.
ClusterPartition cut_tree(const Dendrogram& tree, int K);

ClusterPartition average_linkage(const DistanceMatrix& d, int K);

/// Summed squared pairwise distances inside each group; singletons
/// contribute 0. Nonincreasing in K along dendrogram cuts.
double within_group_variance(const ClusterPartition& partition, const DistanceMatrix& d);

/// Mean silhouette over all points (standard a/b form); points in singleton
/// clusters score 0. Requires 2 <= K <= n-1.
double silhouette_score(const ClusterPartition& partition, const DistanceMatrix& d);

struct ClusterScanRow {
    int K = 0;
    double within_var = 0.0;
    double silhouette = 0.0;  // NaN outside silhouette's K range
};

/// Diagnostics over K = k_min..k_max, all cut from the same dendrogram.
std::vector<ClusterScanRow> scan_cluster_counts(const DistanceMatrix& d, int k_min, int k_max);

}  // namespace argoc
