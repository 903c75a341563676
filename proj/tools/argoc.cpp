// argoc: weekly %ILI nowcasting from search-volume panels.
//
// Subcommands mirror the batch pipeline: validate inputs, cluster the search
// terms, run the rolling nowcast, build bootstrap intervals, evaluate against
// benchmarks, and generate the synthetic demo fixture.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "argoc/pipeline.hpp"

namespace {

// Flags override anything loaded from --config, so the file is read up front.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return argv[i + 1];
    return "";
}

void add_common_flags(CLI::App* cmd, argoc::RunConfig& config, std::string& config_path) {
    cmd->add_option("--config", config_path, "key = value config file; flags override");
    cmd->add_option("--target", config.target_csv, "target CSV (date,ili)");
    cmd->add_option("--predictors", config.predictor_csv, "predictor CSV (date,<terms...>)");
    cmd->add_option("--availability", config.availability_csv,
                    "term availability CSV (term,first_usable_date)");
    cmd->add_option("--partition", config.partition_csv,
                    "partition CSV list: path[@YYYY-Www][;...]");
    cmd->add_option("--external", config.external_prediction_csvs,
                    "external prediction entries name=path")
        ->delimiter(';');
    cmd->add_option("--runs-dir", config.runs_dir, "directory holding run artifacts");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--methods", config.methods, "methods to run")->delimiter(';');
    cmd->add_option("--window,-N", config.N, "rolling training window length");
    cmd->add_option("--lags,-m", config.m, "lagged-target terms");
    cmd->add_option("--alpha", config.alpha, "sparse-group-lasso mixing weight");
    cmd->add_option("--folds", config.folds, "cross-validation folds");
    cmd->add_option("--n-lambda", config.n_lambda, "lambda path length");
    cmd->add_option("--lambda-ratio", config.lambda_ratio, "lambda_min / lambda_max");
    cmd->add_option("--tol", config.tol, "solver tolerance");
    cmd->add_option("--cv-tol", config.cv_tol, "fold-fit tolerance for cross-validation");
    cmd->add_option("--max-iter", config.max_iter, "solver iteration cap");
    cmd->add_option("--cv-every", config.cv_every, "lambda re-selection cadence (weeks)");
    cmd->add_option("--log-eps", config.log_eps, "zero guard for log volumes");
    cmd->add_option("--K", config.K, "cluster count");
    cmd->add_option("--scan-k-min", config.scan_k_min, "K-scan lower bound");
    cmd->add_option("--scan-k-max", config.scan_k_max, "K-scan upper bound");
    cmd->add_option("--level", config.level, "interval nominal level");
    cmd->add_option("--reps", config.reps, "bootstrap replicates");
    cmd->add_option("--block-length", config.mean_block_length, "mean bootstrap block length");
    cmd->add_option("--begin", config.span_begin, "first prediction week (YYYY-Www)");
    cmd->add_option("--end", config.span_end, "last prediction week (YYYY-Www)");
    cmd->add_option("--seed", config.seed, "run seed");
    cmd->add_option("--jobs", config.jobs, "worker threads");
    cmd->add_flag("--strict-intersection", config.strict_intersection,
                  "evaluate only weeks covered by every method");
    cmd->add_option("--season-first-year", config.season_first_year, "first season start year");
    cmd->add_option("--season-last-year", config.season_last_year, "last season start year");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weekly influenza nowcasting with clustered search-term predictors"};
    app.require_subcommand(1);

    argoc::RunConfig config;
    const std::string preloaded = find_config_path(argc, argv);
    if (!preloaded.empty()) {
        try {
            config = argoc::load_config(preloaded);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return argoc::exit_usage;
        }
    }
    std::string config_path;  // swallows --config during the real parse

    argoc::SynthPanelSpec synth_spec;

    CLI::App* validate = app.add_subcommand("validate", "schema-check the configured inputs");
    CLI::App* cluster = app.add_subcommand("cluster", "cluster terms per vocabulary vintage");
    CLI::App* nowcast = app.add_subcommand("nowcast", "rolling weekly nowcast per method");
    CLI::App* intervals = app.add_subcommand("intervals", "stationary-bootstrap intervals");
    CLI::App* evaluate = app.add_subcommand("evaluate", "metric report and plots");
    CLI::App* synth = app.add_subcommand("synth", "write the synthetic demo fixture");
    for (CLI::App* cmd : {validate, cluster, nowcast, intervals, evaluate, synth})
        add_common_flags(cmd, config, config_path);

    synth->add_option("--weeks", synth_spec.weeks, "fixture length");
    synth->add_option("--groups", synth_spec.n_groups, "term groups");
    synth->add_option("--terms-per-group", synth_spec.terms_per_group, "terms per group");
    synth->add_option("--active-groups", synth_spec.active_groups, "groups that drive the target");
    synth->add_option("--regime-week", synth_spec.regime_week, "week of the regime shift (0 = none)");
    synth->add_option("--second-vintage-week", synth_spec.second_vintage_week,
                      "week the late vocabulary arrives (0 = single vintage)");
    synth->add_option("--synth-seed", synth_spec.seed, "fixture seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : argoc::exit_usage;
    }

    if (validate->parsed()) return argoc::cmd_validate(config, std::cerr);
    if (cluster->parsed()) return argoc::cmd_cluster(config, std::cerr);
    if (nowcast->parsed()) return argoc::cmd_nowcast(config, std::cerr);
    if (intervals->parsed()) return argoc::cmd_intervals(config, std::cerr);
    if (evaluate->parsed()) return argoc::cmd_evaluate(config, std::cerr);
    if (synth->parsed()) return argoc::cmd_synth(config, synth_spec, std::cerr);
    return argoc::exit_usage;
}
