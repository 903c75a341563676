#pragma once

#include <cstdint>

#include "argoc/blp.hpp"
#include "argoc/design.hpp"
#include "argoc/nowcast.hpp"
#include "argoc/panel.hpp"

namespace argoc {

/// Parameters of the bundled surveillance fixture: a seasonal AR(2) epidemic
/// curve on the logit scale plus contemporaneous shocks carried by a few
/// active groups of search terms. The active set rotates at `regime_week`, so
/// rolling models must adapt. Terms inside one group share a latent factor,
/// which is what the clustering step is meant to find.
struct SynthPanelSpec {
    int weeks = 700;
    int n_groups = 10;
    int terms_per_group = 3;
    int active_groups = 2;
    int regime_week = 350;          // 0 disables the shift
    int second_vintage_week = 0;    // 0 = single vocabulary vintage
    double second_vintage_fraction = 0.4;  // share of terms arriving late
    double shock_scale = 0.18;      // per active group, logit units
    double obs_noise = 0.05;        // unexplainable part of the target
    double term_noise = 0.3;        // idiosyncratic log-volume noise
    std::uint64_t seed = 1;

    int n_terms() const { return n_groups * terms_per_group; }
};

struct SynthPanel {
    WeeklyPanel raw;                // percent-scale target, raw volumes
    TermPartition true_partition;   // the generating group structure
    AvailabilityTable availability; // empty terms() when single-vintage
    WeekStamp first_week{};
};

SynthPanel synth_panel(const SynthPanelSpec& spec);

/// Gaussian multi-resolution fixture for the cross-regional boosting step:
/// regional truths driven by a shared national factor plus persistent regional
/// deviations; raw estimates are truth plus noise.
struct SynthMultiresSpec {
    int regions = 10;
    int weeks = 600;
    double raw_noise = 0.35;
    double national_noise = 0.15;
    std::uint64_t seed = 1;
};

BoostInputs synth_multires(const SynthMultiresSpec& spec);

/// Plain grouped regression instance (iid standard normal design) for solver
/// tests: y = X beta + noise with the noise variance set from the requested
/// signal-to-noise ratio.
struct SynthRegressionSpec {
    int N = 200;
    int n_groups = 10;
    int group_size = 3;
    int active_groups = 2;
    int m = 0;                      // optional lag-like extra columns
    double snr = 3.0;
    std::uint64_t seed = 1;
};

struct SynthRegression {
    DesignWindow window;
    Eigen::VectorXd true_exo;
    std::vector<std::vector<int>> groups;
    std::vector<int> active_group_ids;  // indices into `groups`
};

SynthRegression synth_regression(const SynthRegressionSpec& spec);

}  // namespace argoc
