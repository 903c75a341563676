#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "argoc/week.hpp"

namespace argoc {

/// Everything a pipeline run needs, loadable from a sectioned key = value file
/// and overridable flag by flag. Serialization is canonical, so a config
/// round-trips byte-identically and can be hashed into run manifests.
struct RunConfig {
    // [data]
    std::string target_csv;
    std::string predictor_csv;
    std::string availability_csv;       // optional
    std::string partition_csv;          // optional; "path@YYYY-Www" entries, ';'-separated
    std::vector<std::string> external_prediction_csvs;  // "name=path" entries
    std::string runs_dir;               // where nowcast artifacts live / go

    // [model]
    int N = 104;
    int m = 52;
    double alpha = 0.95;
    int folds = 10;
    int n_lambda = 50;
    double lambda_ratio = 1e-3;
    double tol = 1e-7;
    double cv_tol = 1e-5;
    int max_iter = 10000;
    int cv_every = 1;
    double log_eps = 0.5;
    std::vector<std::string> methods = {"argo_c", "naive"};

    // [clustering]
    int K = 0;                          // required for the cluster command
    int scan_k_min = 0, scan_k_max = 0; // optional diagnostics range
    bool cluster_on_transformed = true;

    // [intervals]
    double level = 0.95;
    int reps = 2000;
    double mean_block_length = 8.0;

    // [run]
    std::string span_begin;             // YYYY-Www; empty = earliest feasible
    std::string span_end;               // empty = last predictor week
    std::uint64_t seed = 20090329;
    int jobs = 1;
    bool strict_intersection = false;
    int season_first_year = 0, season_last_year = 0;

    // [output]
    std::string out_dir = "out";
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: fixed section and key order, one `key = value` per line.
std::string serialize_config(const RunConfig& config);

/// FNV-1a over the canonical serialization.
std::string config_hash(const RunConfig& config);

}  // namespace argoc
