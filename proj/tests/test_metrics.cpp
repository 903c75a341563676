#include <doctest.h>

#include <argoc/metrics.hpp>
#include <cmath>
#include <random>

using namespace argoc;

TEST_CASE("rmse") {
    const std::vector<double> a{1.0, 2.0}, zero{0.0, 0.0};
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(a, zero) == doctest::Approx(1.5811388).epsilon(1e-7));
    CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(rmse(a, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("mae") {
    const std::vector<double> a{1.0, 2.0}, zero{0.0, 0.0};
    CHECK(mae(a, a) == 0.0);
    CHECK(mae(a, zero) == doctest::Approx(1.5));
}

TEST_CASE("pearson") {
    const std::vector<double> t{1.0, 2.0, 4.0, 3.0, 5.0};
    std::vector<double> affine(5), neg(5);
    for (int i = 0; i < 5; ++i) {
        affine[i] = 2.0 * t[i] + 1.0;
        neg[i] = -t[i];
    }
    CHECK(pearson(affine, t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pearson(neg, t) == doctest::Approx(-1.0).epsilon(1e-12));
    const std::vector<double> flat{2.0, 2.0, 2.0, 2.0, 2.0};
    CHECK_THROWS_AS(pearson(flat, t), std::invalid_argument);
    CHECK_THROWS_AS(pearson(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("rmse >= mae on random aligned pairs") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(2.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> p(30), t(30);
        for (int i = 0; i < 30; ++i) {
            p[i] = gauss(rng);
            t[i] = gauss(rng);
        }
        CHECK(rmse(p, t) >= mae(p, t));
        CHECK(mae(p, t) >= 0.0);
    }
}

TEST_CASE("season slices run week 40 through week 20") {
    const auto slices = season_slices(2014, 2016);
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].name == "'14-'15");
    CHECK(slices[0].begin == WeekStamp{2014, 40});
    CHECK(slices[0].end == WeekStamp{2015, 20});
    CHECK(slices[1].name == "'15-'16");
    // 2015 has 53 ISO weeks; the slice still ends at W20 and spans the long year
    CHECK(slices[1].begin == WeekStamp{2015, 40});
    CHECK(slices[1].end == WeekStamp{2016, 20});
    CHECK(week_diff(slices[1].end, slices[1].begin) ==
          week_diff(slices[0].end, slices[0].begin) + 1);

    SUBCASE("extra slices are appended") {
        auto with_extra =
            season_slices(2014, 2015, {{"whole period", {2009, 13}, {2020, 12}}});
        REQUIRE(with_extra.size() == 2);
        CHECK(with_extra[1].name == "whole period");
    }
    SUBCASE("empty extra list gives only seasons") {
        CHECK(season_slices(2010, 2013).size() == 3);
    }
}

namespace {

PredictionSeries series_of(const std::string& name, const std::vector<WeekStamp>& weeks,
                           const std::vector<double>& values) {
    return {name, weeks, values};
}

}  // namespace

TEST_CASE("build_report flags the best method per slice") {
    std::vector<WeekStamp> weeks;
    WeekStamp w{2014, 35};
    std::vector<double> truth;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(3.0, 0.7);
    for (int i = 0; i < 40; ++i) {
        weeks.push_back(w);
        w = next_week(w);
        truth.push_back(std::abs(gauss(rng)) + 0.5);
    }

    std::vector<double> oracle = truth;
    std::vector<double> off(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) off[i] = truth[i] + 0.8;

    const auto slices = season_slices(2014, 2015, {{"whole period", weeks.front(), weeks.back()}});
    const MetricReport report = build_report(
        {series_of("oracle", weeks, oracle), series_of("naive", weeks, off)}, weeks, truth,
        slices);

    REQUIRE(report.methods.size() == 2);
    for (std::size_t s = 0; s < slices.size(); ++s) {
        CHECK(report.cells[0][s].rmse_best);
        CHECK(report.cells[0][s].mae_best);
        CHECK_FALSE(report.cells[1][s].rmse_best);
        CHECK(report.cells[0][s].rmse == 0.0);
    }
}

TEST_CASE("a single method is best everywhere by default") {
    std::vector<WeekStamp> weeks{{2015, 1}, {2015, 2}, {2015, 3}, {2015, 4}};
    std::vector<double> truth{1.0, 2.0, 3.0, 2.0};
    std::vector<double> pred{1.1, 2.2, 2.9, 2.1};
    const MetricReport report =
        build_report({series_of("only", weeks, pred)}, weeks, truth,
                     {{"all", weeks.front(), weeks.back()}});
    CHECK(report.cells[0][0].rmse_best);
    CHECK(report.cells[0][0].mae_best);
    CHECK(report.cells[0][0].correlation_best);
    CHECK(report.cells[0][0].n_weeks == 4);
}

TEST_CASE("report matches an independent recomputation") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 0.4);
    std::vector<WeekStamp> weeks;
    std::vector<double> truth;
    WeekStamp w{2013, 1};
    for (int i = 0; i < 60; ++i) {
        weeks.push_back(w);
        w = next_week(w);
        truth.push_back(2.0 + 0.5 * std::sin(i / 5.0) + 0.1 * gauss(rng));
    }
    std::vector<PredictionSeries> runs;
    for (int m = 0; m < 3; ++m) {
        std::vector<double> vals(60);
        for (int i = 0; i < 60; ++i) vals[i] = truth[i] + (m + 1) * 0.1 * gauss(rng);
        runs.push_back(series_of("m" + std::to_string(m), weeks, vals));
    }
    const PeriodSlice whole{"whole", weeks.front(), weeks.back()};
    const MetricReport report = build_report(runs, weeks, truth, {whole});

    for (int m = 0; m < 3; ++m) {
        double sse = 0.0, sae = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double e = runs[m].values_pct[i] - truth[i];
            sse += e * e;
            sae += std::abs(e);
        }
        CHECK(report.cells[m][0].rmse ==
              doctest::Approx(std::sqrt(sse / 60.0)).scale(1.0).epsilon(1e-10));
        CHECK(report.cells[m][0].mae == doctest::Approx(sae / 60.0).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("whole-period rmse sits inside the per-slice envelope") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 0.5);
    std::vector<WeekStamp> weeks;
    std::vector<double> truth, pred;
    WeekStamp w{2015, 1};
    for (int i = 0; i < 52; ++i) {
        weeks.push_back(w);
        w = next_week(w);
        truth.push_back(3.0);
        pred.push_back(3.0 + gauss(rng));
    }
    const PeriodSlice first{"a", weeks[0], weeks[25]};
    const PeriodSlice second{"b", weeks[26], weeks[51]};
    const PeriodSlice whole{"w", weeks[0], weeks[51]};
    const MetricReport report =
        build_report({series_of("m", weeks, pred)}, weeks, truth, {first, second, whole});
    const double lo = std::min(report.cells[0][0].rmse, report.cells[0][1].rmse);
    const double hi = std::max(report.cells[0][0].rmse, report.cells[0][1].rmse);
    CHECK(report.cells[0][2].rmse >= lo - 1e-12);
    CHECK(report.cells[0][2].rmse <= hi + 1e-12);
}

TEST_CASE("strict intersection drops weeks any method misses") {
    std::vector<WeekStamp> weeks{{2015, 1}, {2015, 2}, {2015, 3}, {2015, 4}};
    std::vector<double> truth{1.0, 2.0, 3.0, 4.0};
    PredictionSeries full = series_of("full", weeks, {1.0, 2.0, 3.0, 4.0});
    PredictionSeries part = series_of("part", {weeks[1], weeks[2]}, {2.0, 3.0});
    const PeriodSlice whole{"w", weeks.front(), weeks.back()};

    const MetricReport loose = build_report({full, part}, weeks, truth, {whole}, false);
    CHECK(loose.cells[0][0].n_weeks == 4);
    CHECK(loose.cells[1][0].n_weeks == 2);

    const MetricReport strict = build_report({full, part}, weeks, truth, {whole}, true);
    CHECK(strict.cells[0][0].n_weeks == 2);
    CHECK(strict.cells[1][0].n_weeks == 2);
}
