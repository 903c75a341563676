#include <benchmark/benchmark.h>

#include <argoc/bootstrap.hpp>
#include <argoc/clustering.hpp>
#include <argoc/sgl.hpp>
#include <argoc/synth.hpp>
#include <random>

using namespace argoc;

namespace {

SynthRegression make_instance(int N, int n_groups, int group_size, std::uint64_t seed) {
    SynthRegressionSpec spec;
    spec.N = N;
    spec.n_groups = n_groups;
    spec.group_size = group_size;
    spec.active_groups = 2;
    spec.seed = seed;
    return synth_regression(spec);
}

}  // namespace

static void BM_sgl_fit(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const int groups = static_cast<int>(state.range(1));
    SynthRegression inst = make_instance(N, groups, 3, 7);
    auto [w, st] = standardize_columns(inst.window);
    PenaltySpec pen;
    pen.alpha = 0.95;
    pen.groups = inst.groups;
    pen.lambda = lambda_max(w, pen) * 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(w, pen, {.tol = 1e-7}));
    }
}
BENCHMARK(BM_sgl_fit)->Args({104, 10})->Args({104, 50})->Args({208, 50});

static void BM_sgl_path(benchmark::State& state) {
    SynthRegression inst = make_instance(104, 20, 3, 11);
    auto [w, st] = standardize_columns(inst.window);
    PenaltySpec pen;
    pen.alpha = 0.95;
    pen.groups = inst.groups;
    const auto path = lambda_path(w, pen, 25, 1e-2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_path(w, pen, path, {.tol = 1e-6}));
    }
}
BENCHMARK(BM_sgl_path);

static void BM_sgl_cross_validate(benchmark::State& state) {
    SynthRegression inst = make_instance(104, 20, 3, 13);
    auto [w, st] = standardize_columns(inst.window);
    PenaltySpec pen;
    pen.alpha = 0.95;
    pen.groups = inst.groups;
    const auto path = lambda_path(w, pen, 25, 1e-2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cross_validate(w, pen, 5, path, {.tol = 1e-5}));
    }
}
BENCHMARK(BM_sgl_cross_validate);

static void BM_average_linkage(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd series(260, n);
    for (Eigen::Index i = 0; i < series.size(); ++i) series.data()[i] = gauss(rng);
    const DistanceMatrix dm = correlation_distance(series);
    for (auto _ : state) {
        benchmark::DoNotOptimize(average_linkage(dm, n / 3));
    }
}
BENCHMARK(BM_average_linkage)->Arg(71)->Arg(161);

static void BM_stationary_bootstrap_week(benchmark::State& state) {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> gauss(0.0, 0.3);
    Eigen::VectorXd res(104);
    for (Eigen::Index i = 0; i < res.size(); ++i) res[i] = gauss(gen);
    NowcastRun run;
    run.method = "argo_c";
    WeekRecord rec;
    rec.week = {2015, 1};
    rec.prediction_logit = -3.0;
    rec.prediction_pct = inverse_logit(-3.0);
    rec.residuals_logit = res;
    run.weeks.push_back(rec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_intervals(run, 0.95, 2000, 8.0, 42));
    }
}
BENCHMARK(BM_stationary_bootstrap_week);

BENCHMARK_MAIN();
