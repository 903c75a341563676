#pragma once

#include <ostream>

#include "argoc/config.hpp"
#include "argoc/synth.hpp"

namespace argoc {

/// Exit codes shared by every command.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_schema = 2,
    exit_empty = 3,
    exit_internal = 4,
};

/// Schema check of all configured inputs; prints a summary line per file.
int cmd_validate(const RunConfig& config, std::ostream& log);

/// Per-vintage partition CSV + dendrogram JSONL + optional K-scan table.
int cmd_cluster(const RunConfig& config, std::ostream& log);

/// Run CSV per method, traceplot CSVs and interval CSVs for the SGL methods,
/// heatmap SVGs, and a manifest recording the config hash.
int cmd_nowcast(const RunConfig& config, std::ostream& log);

/// Interval CSVs only (recomputes the deterministic runs).
int cmd_intervals(const RunConfig& config, std::ostream& log);

/// Metric report CSVs (with best flags) + predictions-vs-truth SVG; consumes
/// run CSVs from runs_dir plus any configured external prediction files.
int cmd_evaluate(const RunConfig& config, std::ostream& log);

/// Writes the bundled synthetic fixture (target, predictors, availability,
/// generating partition) into the output directory.
int cmd_synth(const RunConfig& config, const SynthPanelSpec& spec, std::ostream& log);

}  // namespace argoc
