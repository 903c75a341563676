#include <doctest.h>

#include <argoc/config.hpp>
#include <argoc/csv.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>

using namespace argoc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / ("argoc_io_test_" + std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

}  // namespace

TEST_CASE("format_number round-trips doubles") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        const double x = unit(rng) * std::pow(10.0, int(i % 13) - 6);
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(0.0) == "0");
}

TEST_CASE("wide CSV round trip") {
    const fs::path dir = temp_dir();
    WideTable t;
    t.names = {"alpha", "beta, with comma"};
    WeekStamp w{2013, 50};
    t.weeks = {w, next_week(w), next_week(next_week(w))};
    t.values.resize(3, 2);
    t.values << 1.5, 2.25, 3.125, 0.875, 10.0, 0.1;
    write_wide_csv(dir / "t.csv", t);

    const WideTable back = read_wide_csv(dir / "t.csv", false);
    CHECK(back.names == t.names);
    REQUIRE(back.weeks.size() == 3);
    CHECK(back.weeks[0] == t.weeks[0]);
    for (Eigen::Index i = 0; i < t.values.size(); ++i)
        CHECK(back.values.data()[i] == t.values.data()[i]);
}

TEST_CASE("schema errors carry file and line") {
    const fs::path dir = temp_dir();
    write_file(dir / "bad.csv", "date,ili\n2014-W01,2.0\n2014-W02,oops\n");
    try {
        read_wide_csv(dir / "bad.csv", false);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.csv:3") != std::string::npos);
    }

    write_file(dir / "gapless.csv", "date,ili\n2014-W02,2.0\n2014-W01,2.0\n");
    CHECK_THROWS_AS(read_wide_csv(dir / "gapless.csv", false), SchemaError);
    write_file(dir / "nohead.csv", "when,ili\n2014-W01,2.0\n");
    CHECK_THROWS_AS(read_wide_csv(dir / "nohead.csv", false), SchemaError);
    CHECK_THROWS_AS(read_wide_csv(dir / "missing.csv", false), SchemaError);
}

TEST_CASE("missing cells read as NaN only when allowed") {
    const fs::path dir = temp_dir();
    write_file(dir / "t.csv", "date,ili\n2014-W01,2.0\n2014-W02,\n");
    const WideTable t = read_wide_csv(dir / "t.csv", true);
    CHECK(std::isnan(t.values(1, 0)));
    CHECK_THROWS_AS(read_wide_csv(dir / "t.csv", false), SchemaError);
}

TEST_CASE("availability and partition CSVs") {
    const fs::path dir = temp_dir();
    write_file(dir / "avail.csv",
               "term,first_usable_date\nflu shot,2009-03-29\ncough,2010-05-22\n");
    const AvailabilityTable avail = read_availability_csv(dir / "avail.csv");
    REQUIRE(avail.terms.size() == 2);
    CHECK(avail.first_usable[0] == WeekStamp{2009, 13});
    CHECK(avail.first_usable[1] == WeekStamp{2010, 20});

    TermPartition part;
    part.terms = {"flu shot", "cough, dry"};
    part.group_ids = {1, 2};
    write_partition_csv(dir / "part.csv", part);
    const TermPartition back = read_partition_csv(dir / "part.csv");
    CHECK(back.terms == part.terms);
    CHECK(back.group_ids == part.group_ids);

    write_file(dir / "badpart.csv", "term,group_id\nx,0\n");
    CHECK_THROWS_AS(read_partition_csv(dir / "badpart.csv"), SchemaError);
}

TEST_CASE("dendrogram JSONL emission") {
    const fs::path dir = temp_dir();
    Dendrogram tree;
    tree.n = 3;
    tree.merges.push_back({{0}, {2}, 0.25});
    tree.merges.push_back({{0, 2}, {1}, 0.5});
    write_dendrogram_jsonl(dir / "d.jsonl", tree);
    std::ifstream in(dir / "d.jsonl");
    std::string line;
    std::getline(in, line);
    CHECK(line == "{\"left\":[0],\"right\":[2],\"height\":0.25}");
    std::getline(in, line);
    CHECK(line == "{\"left\":[0,2],\"right\":[1],\"height\":0.5}");
}

TEST_CASE("panel assembly aligns target and predictors") {
    const fs::path dir = temp_dir();
    // predictors run one week past the target (the current week)
    write_file(dir / "target.csv", "date,ili\n2014-W01,1.5\n2014-W02,2.0\n2014-W03,2.5\n");
    write_file(dir / "pred.csv",
               "date,a,b\n2014-W01,5,6\n2014-W02,7,8\n2014-W03,9,10\n2014-W04,11,12\n");
    const WeeklyPanel panel =
        assemble_panel(read_target_csv(dir / "target.csv"), read_predictor_csv(dir / "pred.csv"));
    REQUIRE(panel.n_weeks() == 4);
    CHECK(panel.target_known(2));
    CHECK_FALSE(panel.target_known(3));
    CHECK(panel.predictors(3, 1) == 12.0);

    // a hole in the predictor table is a schema error
    write_file(dir / "holey.csv", "date,a,b\n2014-W01,5,6\n2014-W03,9,10\n");
    CHECK_THROWS_AS(
        assemble_panel(read_target_csv(dir / "target.csv"), read_predictor_csv(dir / "holey.csv")),
        SchemaError);
}

TEST_CASE("run CSV round trip") {
    const fs::path dir = temp_dir();
    NowcastRun run;
    run.method = "argo_c";
    WeekStamp w{2015, 10};
    for (int i = 0; i < 3; ++i) {
        WeekRecord rec;
        rec.week = w;
        rec.prediction_pct = 1.25 + i;
        rec.lambda = 0.125 / (i + 1);
        run.weeks.push_back(rec);
        w = next_week(w);
    }
    const std::vector<WeekStamp> tw{run.weeks[0].week, run.weeks[1].week};
    const std::vector<double> tv{1.0, 2.0};
    write_run_csv(dir / "run.csv", run, tw, tv);

    const PredictionSeries series = read_run_csv(dir / "run.csv");
    CHECK(series.method == "argo_c");
    REQUIRE(series.weeks.size() == 3);
    CHECK(series.values_pct[2] == 3.25);

    // a run CSV is not a bare external-prediction table
    CHECK_THROWS_AS(read_external_prediction_csv(dir / "run.csv", "x"), SchemaError);
}

TEST_CASE("external prediction CSV") {
    const fs::path dir = temp_dir();
    write_file(dir / "gft.csv", "date,prediction\n2012-W01,2.25\n2012-W02,2.5\n");
    const PredictionSeries gft = read_external_prediction_csv(dir / "gft.csv", "gft");
    CHECK(gft.method == "gft");
    REQUIRE(gft.weeks.size() == 2);
    CHECK(gft.values_pct[1] == 2.5);
}

TEST_CASE("traceplot CSV round trip") {
    const fs::path dir = temp_dir();
    TraceplotMatrix trace;
    trace.columns = {"ar_1", "a", "b"};
    trace.column_group = {0, 1, 1};
    trace.weeks = {WeekStamp{2015, 1}, WeekStamp{2015, 2}};
    trace.included = {{1, 0, 1}, {0, 1, 1}};
    write_traceplot_csv(dir / "trace.csv", trace);
    const TraceplotMatrix back = read_traceplot_csv(dir / "trace.csv");
    CHECK(back.columns == trace.columns);
    CHECK(back.included == trace.included);
}

TEST_CASE("config round trip is byte-identical") {
    RunConfig c;
    c.target_csv = "data/target.csv";
    c.predictor_csv = "data/predictors.csv";
    c.methods = {"argo_c", "naive", "var1"};
    c.external_prediction_csvs = {"gft=data/gft.csv"};
    c.alpha = 0.9;
    c.seed = 987654321;
    c.partition_csv = "p1.csv@2009-W13;p2.csv@2010-W20";

    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    CHECK(config_hash(back) == config_hash(c));

    RunConfig other = c;
    other.seed += 1;
    CHECK(config_hash(other) != config_hash(c));

    CHECK_THROWS_AS(parse_config("[model]\nbogus_key = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[model]\nN impossible\n"), std::invalid_argument);
}

TEST_CASE("model dump CSV") {
    const fs::path dir = temp_dir();
    SglModel model;
    model.intercept = -3.5;
    model.ar_coef = Eigen::VectorXd::Zero(2);
    model.ar_coef << 0.25, 0.0;
    model.exo_coef = Eigen::VectorXd::Zero(1);
    model.exo_coef << 1.5;
    model.penalty.alpha = 0.95;
    model.penalty.lambda = 0.125;
    model.converged = true;
    model.objective_value = 0.75;
    write_model_csv(dir / "model.csv", model, {"flu"});

    std::ifstream in(dir / "model.csv");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all == "name,value\nintercept,-3.5\nar_1,0.25\nar_2,0\nflu,1.5\n"
                 "lambda,0.125\nalpha,0.95\nconverged,1\nobjective,0.75\n");
}

TEST_CASE("boost CSV emission") {
    const fs::path dir = temp_dir();
    std::vector<BoostRow> rows;
    rows.push_back({WeekStamp{2015, 3}, "region 1", 1.5, 1.75, 1.8});
    rows.push_back({WeekStamp{2015, 4}, "region 2", 2.0, 2.25, 2.25});
    write_boost_csv(dir / "boost.csv", rows);
    std::ifstream in(dir / "boost.csv");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all ==
          "date,region,raw,boosted,truth\n"
          "2015-W03,region 1,1.5,1.75,1.8\n"
          "2015-W04,region 2,2,2.25,2.25\n");
}

TEST_CASE("calendar-dated CSVs map onto ISO weeks") {
    const fs::path dir = temp_dir();
    // CDC-style Saturday week endings
    write_file(dir / "t.csv",
               "date,ili\n2009-04-04,1.5\n2009-04-11,2.0\n2009-04-18,2.5\n");
    const WideTable t = read_wide_csv(dir / "t.csv", false);
    REQUIRE(t.weeks.size() == 3);
    CHECK(t.weeks[0] == WeekStamp{2009, 14});
    CHECK(t.weeks[2] == WeekStamp{2009, 16});

    // two dates inside one ISO week collide
    write_file(dir / "dup.csv", "date,ili\n2009-04-04,1.5\n2009-04-05,2.0\n");
    CHECK_THROWS_AS(read_wide_csv(dir / "dup.csv", false), SchemaError);
}
