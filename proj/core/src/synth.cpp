#include "argoc/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace argoc {

namespace {

constexpr double kBaseLogit = -3.8918202981106265;  // logit(2%)

WeekStamp fixture_start(int /*weeks*/) { return WeekStamp{2004, 2}; }

}  // namespace

SynthPanel synth_panel(const SynthPanelSpec& spec) {
    const int T = spec.weeks;
    const int p = spec.n_terms();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Per-term log-volume anatomy.
    std::vector<double> term_level(p), term_factor_load(p), term_trend_load(p);
    for (int j = 0; j < p; ++j) {
        term_level[j] = 3.0 + 2.0 * unit(rng);
        term_factor_load[j] = 0.8 + 0.4 * unit(rng);
        term_trend_load[j] = 0.4 + 0.4 * unit(rng);
    }

    // Epidemic curve pieces.
    const double phi1 = 0.55, phi2 = 0.25, sigma_w = 0.12, season_amp = 0.9;
    double a_prev = 0.0, a_prev2 = 0.0;

    // Active groups occupy a contiguous block that rotates at the regime shift.
    const auto active_at = [&](int t, int g) {
        const int offset =
            (spec.regime_week > 0 && t >= spec.regime_week) ? spec.active_groups : 0;
        const int lo = offset % spec.n_groups;
        const int hi = (offset + spec.active_groups - 1) % spec.n_groups;
        if (lo <= hi) return g >= lo && g <= hi;
        return g >= lo || g <= hi;
    };

    SynthPanel out;
    out.first_week = fixture_start(T);
    WeeklyPanel& panel = out.raw;
    panel.state = TransformState::raw;
    panel.weeks.resize(T);
    panel.target.resize(T);
    panel.predictors.resize(T, p);
    WeekStamp w = out.first_week;
    for (int t = 0; t < T; ++t) {
        panel.weeks[t] = w;
        w = next_week(w);
    }

    for (int j = 0; j < p; ++j) {
        const int g = j / spec.terms_per_group;
        char name[32];
        std::snprintf(name, sizeof(name), "term_g%02d_%d", g + 1, j % spec.terms_per_group + 1);
        panel.terms.push_back(name);
    }

    for (int t = 0; t < T; ++t) {
        const double season =
            season_amp * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 52.0);
        const double a = phi1 * a_prev + phi2 * a_prev2 + sigma_w * gauss(rng);
        a_prev2 = a_prev;
        a_prev = a;

        std::vector<double> shock(spec.n_groups);
        for (int g = 0; g < spec.n_groups; ++g) shock[g] = gauss(rng);

        double events = 0.0;
        for (int g = 0; g < spec.n_groups; ++g)
            if (active_at(t, g)) events += spec.shock_scale * shock[g];

        const double level_shift = (spec.regime_week > 0 && t >= spec.regime_week) ? 0.3 : 0.0;
        const double eta =
            kBaseLogit + level_shift + season + a + events + spec.obs_noise * gauss(rng);
        panel.target[t] = inverse_logit(eta);

        const double trend = season + a;
        for (int j = 0; j < p; ++j) {
            const int g = j / spec.terms_per_group;
            const double lv = term_level[j] + term_factor_load[j] * shock[g] +
                              term_trend_load[j] * trend + spec.term_noise * gauss(rng);
            panel.predictors(t, j) = std::exp(lv);
        }
    }

    for (int j = 0; j < p; ++j) {
        out.true_partition.terms.push_back(panel.terms[j]);
        out.true_partition.group_ids.push_back(j / spec.terms_per_group + 1);
    }

    if (spec.second_vintage_week > 0 && spec.second_vintage_week < T) {
        const int late_from = p - static_cast<int>(std::round(spec.second_vintage_fraction * p));
        const WeekStamp vintage = panel.weeks[spec.second_vintage_week];
        for (int j = std::max(0, late_from); j < p; ++j) {
            out.availability.terms.push_back(panel.terms[j]);
            out.availability.first_usable.push_back(vintage);
        }
    }
    return out;
}

BoostInputs synth_multires(const SynthMultiresSpec& spec) {
    const int R = spec.regions;
    const int T = spec.weeks;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> mu(R), load(R);
    for (int r = 0; r < R; ++r) {
        mu[r] = kBaseLogit + 0.6 * (unit(rng) - 0.5);
        load[r] = 0.7 + 0.6 * unit(rng);
    }

    BoostInputs inputs;
    inputs.raw_regional.resize(T, R);
    inputs.national.resize(T);
    inputs.lagged_truth.resize(T, R);
    inputs.truth.resize(T, R);
    inputs.weeks.resize(T);
    WeekStamp w{2009, 40};
    for (int t = 0; t < T; ++t) {
        inputs.weeks[t] = w;
        w = next_week(w);
    }

    double national_factor = 0.0;
    Eigen::VectorXd regional_dev = Eigen::VectorXd::Zero(R);
    Eigen::VectorXd truth_prev = Eigen::VectorXd::Zero(R);
    for (int r = 0; r < R; ++r) truth_prev[r] = mu[r];

    for (int t = 0; t < T; ++t) {
        national_factor = 0.7 * national_factor + 0.3 * gauss(rng);
        for (int r = 0; r < R; ++r)
            regional_dev[r] = 0.6 * regional_dev[r] + 0.25 * gauss(rng);

        Eigen::VectorXd truth(R);
        for (int r = 0; r < R; ++r) truth[r] = mu[r] + load[r] * national_factor + regional_dev[r];

        inputs.truth.row(t) = truth;
        inputs.lagged_truth.row(t) = truth_prev;
        for (int r = 0; r < R; ++r)
            inputs.raw_regional(t, r) = truth[r] + spec.raw_noise * gauss(rng);
        inputs.national(t) = truth.mean() + spec.national_noise * gauss(rng);
        truth_prev = truth;
    }
    return inputs;
}

SynthRegression synth_regression(const SynthRegressionSpec& spec) {
    const int p = spec.n_groups * spec.group_size;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SynthRegression out;
    out.groups.resize(spec.n_groups);
    for (int g = 0; g < spec.n_groups; ++g)
        for (int j = 0; j < spec.group_size; ++j)
            out.groups[g].push_back(g * spec.group_size + j);
    for (int g = 0; g < spec.active_groups; ++g) out.active_group_ids.push_back(g);

    out.true_exo = Eigen::VectorXd::Zero(p);
    for (int g : out.active_group_ids)
        for (int j : out.groups[g]) {
            const double mag = 0.5 + unit(rng);
            out.true_exo[j] = unit(rng) < 0.5 ? -mag : mag;
        }

    DesignWindow& w = out.window;
    w.exo_block.resize(spec.N, p);
    w.ar_block.resize(spec.N, spec.m);
    w.pred_exo.resize(p);
    w.pred_ar.resize(spec.m);
    for (Eigen::Index i = 0; i < w.exo_block.size(); ++i) w.exo_block.data()[i] = gauss(rng);
    for (Eigen::Index i = 0; i < w.ar_block.size(); ++i) w.ar_block.data()[i] = gauss(rng);
    for (Eigen::Index j = 0; j < p; ++j) w.pred_exo[j] = gauss(rng);
    for (Eigen::Index j = 0; j < spec.m; ++j) w.pred_ar[j] = gauss(rng);

    const double signal_sd = out.true_exo.norm();
    const double noise_sd = signal_sd > 0.0 ? signal_sd / std::sqrt(spec.snr) : 1.0;
    w.response = w.exo_block * out.true_exo;
    for (Eigen::Index i = 0; i < spec.N; ++i) w.response[i] += noise_sd * gauss(rng);
    return out;
}

}  // namespace argoc
