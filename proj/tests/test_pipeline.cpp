#include <doctest.h>

#include <argoc/csv.hpp>
#include <argoc/pipeline.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace argoc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("argoc_pipe_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small fixture shared by the pipeline cases: 6 terms in 3 groups.
RunConfig fixture_config(const fs::path& dir, std::uint64_t seed = 21) {
    SynthPanelSpec spec;
    spec.weeks = 200;
    spec.n_groups = 3;
    spec.terms_per_group = 2;
    spec.active_groups = 1;
    spec.regime_week = 0;
    spec.seed = seed;

    RunConfig config;
    config.out_dir = (dir / "fixture").string();
    std::ostringstream log;
    REQUIRE(cmd_synth(config, spec, log) == exit_ok);

    RunConfig run;
    run.target_csv = (dir / "fixture" / "target.csv").string();
    run.predictor_csv = (dir / "fixture" / "predictors.csv").string();
    run.out_dir = (dir / "out").string();
    run.runs_dir = (dir / "out").string();
    run.m = 2;
    run.folds = 5;
    run.n_lambda = 15;
    run.cv_every = 4;
    run.reps = 200;
    run.K = 3;
    return run;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("validate accepts the fixture and rejects a missing file") {
    const fs::path dir = temp_dir("validate");
    RunConfig config = fixture_config(dir);
    std::ostringstream log;
    CHECK(cmd_validate(config, log) == exit_ok);

    config.predictor_csv = (dir / "nope.csv").string();
    CHECK(cmd_validate(config, log) == exit_schema);
}

TEST_CASE("cluster recovers the generating groups on the demo fixture") {
    const fs::path dir = temp_dir("cluster");
    RunConfig config = fixture_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_cluster(config, log) == exit_ok);

    const fs::path part_file = fs::path(config.out_dir) / "partition_2004-W02.csv";
    REQUIRE(fs::exists(part_file));
    const TermPartition part = read_partition_csv(part_file);
    CHECK(part.K() == 3);
    // terms from the same generating block share a group
    REQUIRE(part.terms.size() == 6);
    CHECK(part.group_ids[0] == part.group_ids[1]);
    CHECK(part.group_ids[2] == part.group_ids[3]);
    CHECK(part.group_ids[4] == part.group_ids[5]);
    CHECK(part.group_ids[0] != part.group_ids[2]);

    SUBCASE("K=1 puts every term in one group") {
        config.K = 1;
        config.out_dir = (dir / "k1").string();
        REQUIRE(cmd_cluster(config, log) == exit_ok);
        const TermPartition single =
            read_partition_csv(fs::path(config.out_dir) / "partition_2004-W02.csv");
        for (int g : single.group_ids) CHECK(g == 1);
    }
}

TEST_CASE("cluster with a missing input writes nothing and exits 2") {
    const fs::path dir = temp_dir("cluster_missing");
    RunConfig config = fixture_config(dir);
    config.predictor_csv = (dir / "absent.csv").string();
    config.out_dir = (dir / "never").string();
    std::ostringstream log;
    CHECK(cmd_cluster(config, log) == exit_schema);
    CHECK_FALSE(fs::exists(dir / "never"));
}

TEST_CASE("nowcast writes runs, traceplots, intervals and a manifest") {
    const fs::path dir = temp_dir("nowcast");
    RunConfig config = fixture_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_cluster(config, log) == exit_ok);
    config.partition_csv = (fs::path(config.out_dir) / "partition_2004-W02.csv").string();
    config.methods = {"argo_c", "naive"};
    config.span_begin = "2007-W01";
    config.span_end = "2007-W16";

    REQUIRE(cmd_nowcast(config, log) == exit_ok);
    const fs::path out = config.out_dir;
    REQUIRE(fs::exists(out / "run_argo_c.csv"));
    REQUIRE(fs::exists(out / "run_naive.csv"));
    REQUIRE(fs::exists(out / "intervals_argo_c.csv"));
    REQUIRE(fs::exists(out / "manifest.txt"));
    CHECK(fs::exists(out / "traceplot_argo_c_2004-W02.csv"));
    CHECK(fs::exists(out / "model_argo_c.csv"));
    CHECK(slurp(out / "model_argo_c.csv").find("name,value\nintercept,") == 0);

    const PredictionSeries a = read_run_csv(out / "run_argo_c.csv");
    const PredictionSeries n = read_run_csv(out / "run_naive.csv");
    CHECK(a.weeks == n.weeks);  // identical coverage once history suffices
    CHECK(a.weeks.size() == 16);

    const std::string manifest = slurp(out / "manifest.txt");
    CHECK(manifest.find("config_hash = " + config_hash(config)) != std::string::npos);

    SUBCASE("rerunning into the same directory is byte-identical") {
        const std::string before = slurp(out / "run_argo_c.csv") +
                                   slurp(out / "intervals_argo_c.csv") +
                                   slurp(out / "manifest.txt");
        REQUIRE(cmd_nowcast(config, log) == exit_ok);
        const std::string after = slurp(out / "run_argo_c.csv") +
                                  slurp(out / "intervals_argo_c.csv") +
                                  slurp(out / "manifest.txt");
        CHECK(before == after);
    }
}

TEST_CASE("a span before the data start yields empty runs and exit 0") {
    const fs::path dir = temp_dir("earlyspan");
    RunConfig config = fixture_config(dir);
    config.methods = {"naive"};
    config.span_begin = "1990-W01";
    config.span_end = "1990-W10";
    std::ostringstream log;
    CHECK(cmd_nowcast(config, log) == exit_ok);
    const PredictionSeries n = [&] {
        try {
            return read_run_csv(fs::path(config.out_dir) / "run_naive.csv");
        } catch (const SchemaError&) {
            return PredictionSeries{};  // header-only file
        }
    }();
    CHECK(n.weeks.empty());
}

TEST_CASE("evaluate builds a report with dashes outside an external series' span") {
    const fs::path dir = temp_dir("evaluate");
    RunConfig config = fixture_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_cluster(config, log) == exit_ok);
    config.partition_csv = (fs::path(config.out_dir) / "partition_2004-W02.csv").string();
    config.methods = {"argo_c", "naive"};
    config.span_begin = "2006-W40";
    config.span_end = "2007-W30";
    REQUIRE(cmd_nowcast(config, log) == exit_ok);

    // external benchmark covering only a few weeks of the span
    const fs::path gft = dir / "gft.csv";
    {
        std::ofstream out(gft);
        out << "date,prediction\n2007-W01,2.0\n2007-W02,2.0\n2007-W03,2.0\n2007-W04,2.0\n";
    }
    config.external_prediction_csvs = {"gft=" + gft.string()};
    config.season_first_year = 2006;
    config.season_last_year = 2007;
    REQUIRE(cmd_evaluate(config, log) == exit_ok);

    const std::string report = slurp(fs::path(config.out_dir) / "report.csv");
    CHECK(report.find("rmse,gft") != std::string::npos);
    // gft has no weeks in the '07-'08 season (or later slices): a -- cell exists
    CHECK(report.find("--") != std::string::npos);
    CHECK(fs::exists(fs::path(config.out_dir) / "report.best.csv"));
    CHECK(fs::exists(fs::path(config.out_dir) / "predictions.svg"));

    SUBCASE("no run files is a usage error") {
        RunConfig empty = config;
        empty.runs_dir = (dir / "nothing").string();
        empty.external_prediction_csvs.clear();
        fs::create_directories(empty.runs_dir);
        CHECK(cmd_evaluate(empty, log) == exit_usage);
    }
}

TEST_CASE("intervals command recomputes interval CSVs") {
    const fs::path dir = temp_dir("intervals");
    RunConfig config = fixture_config(dir);
    std::ostringstream log;
    REQUIRE(cmd_cluster(config, log) == exit_ok);
    config.partition_csv = (fs::path(config.out_dir) / "partition_2004-W02.csv").string();
    config.methods = {"argo_c"};
    config.span_begin = "2007-W01";
    config.span_end = "2007-W06";
    config.level = 0.9;
    REQUIRE(cmd_intervals(config, log) == exit_ok);
    const std::string body = slurp(fs::path(config.out_dir) / "intervals_argo_c.csv");
    CHECK(body.find("date,lower,prediction,upper,level") == 0);
    CHECK(body.find("0.9") != std::string::npos);

    SUBCASE("no SGL methods gives an empty-result exit") {
        config.methods = {"naive"};
        CHECK(cmd_intervals(config, log) == exit_empty);
    }
}
