#include "argoc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "argoc/csv.hpp"

namespace argoc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, ';')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += v[i];
    }
    return out;
}

long to_long(const std::string& key, const std::string& value) {
    long v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw std::invalid_argument("config: " + key + " must be an integer, got '" + value + "'");
    return v;
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw std::invalid_argument("config: " + key + " must be a number, got '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: " + key + " must be true or false");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "data.target") c.target_csv = value;
        else if (key == "data.predictors") c.predictor_csv = value;
        else if (key == "data.availability") c.availability_csv = value;
        else if (key == "data.partition") c.partition_csv = value;
        else if (key == "data.external_predictions") c.external_prediction_csvs = split_list(value);
        else if (key == "data.runs_dir") c.runs_dir = value;
        else if (key == "model.N") c.N = static_cast<int>(to_long(key, value));
        else if (key == "model.m") c.m = static_cast<int>(to_long(key, value));
        else if (key == "model.alpha") c.alpha = to_double(key, value);
        else if (key == "model.folds") c.folds = static_cast<int>(to_long(key, value));
        else if (key == "model.n_lambda") c.n_lambda = static_cast<int>(to_long(key, value));
        else if (key == "model.lambda_ratio") c.lambda_ratio = to_double(key, value);
        else if (key == "model.tol") c.tol = to_double(key, value);
        else if (key == "model.cv_tol") c.cv_tol = to_double(key, value);
        else if (key == "model.max_iter") c.max_iter = static_cast<int>(to_long(key, value));
        else if (key == "model.cv_every") c.cv_every = static_cast<int>(to_long(key, value));
        else if (key == "model.log_eps") c.log_eps = to_double(key, value);
        else if (key == "model.methods") c.methods = split_list(value);
        else if (key == "clustering.K") c.K = static_cast<int>(to_long(key, value));
        else if (key == "clustering.scan_k_min") c.scan_k_min = static_cast<int>(to_long(key, value));
        else if (key == "clustering.scan_k_max") c.scan_k_max = static_cast<int>(to_long(key, value));
        else if (key == "clustering.on_transformed") c.cluster_on_transformed = to_bool(key, value);
        else if (key == "intervals.level") c.level = to_double(key, value);
        else if (key == "intervals.reps") c.reps = static_cast<int>(to_long(key, value));
        else if (key == "intervals.mean_block_length") c.mean_block_length = to_double(key, value);
        else if (key == "run.span_begin") c.span_begin = value;
        else if (key == "run.span_end") c.span_end = value;
        else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(to_long(key, value));
        else if (key == "run.jobs") c.jobs = static_cast<int>(to_long(key, value));
        else if (key == "run.strict_intersection") c.strict_intersection = to_bool(key, value);
        else if (key == "run.season_first_year") c.season_first_year = static_cast<int>(to_long(key, value));
        else if (key == "run.season_last_year") c.season_last_year = static_cast<int>(to_long(key, value));
        else if (key == "output.dir") c.out_dir = value;
        else throw std::invalid_argument("config line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[data]\n";
    out << "target = " << c.target_csv << "\n";
    out << "predictors = " << c.predictor_csv << "\n";
    out << "availability = " << c.availability_csv << "\n";
    out << "partition = " << c.partition_csv << "\n";
    out << "external_predictions = " << join_list(c.external_prediction_csvs) << "\n";
    out << "runs_dir = " << c.runs_dir << "\n";
    out << "[model]\n";
    out << "N = " << c.N << "\n";
    out << "m = " << c.m << "\n";
    out << "alpha = " << format_number(c.alpha) << "\n";
    out << "folds = " << c.folds << "\n";
    out << "n_lambda = " << c.n_lambda << "\n";
    out << "lambda_ratio = " << format_number(c.lambda_ratio) << "\n";
    out << "tol = " << format_number(c.tol) << "\n";
    out << "cv_tol = " << format_number(c.cv_tol) << "\n";
    out << "max_iter = " << c.max_iter << "\n";
    out << "cv_every = " << c.cv_every << "\n";
    out << "log_eps = " << format_number(c.log_eps) << "\n";
    out << "methods = " << join_list(c.methods) << "\n";
    out << "[clustering]\n";
    out << "K = " << c.K << "\n";
    out << "scan_k_min = " << c.scan_k_min << "\n";
    out << "scan_k_max = " << c.scan_k_max << "\n";
    out << "on_transformed = " << (c.cluster_on_transformed ? "true" : "false") << "\n";
    out << "[intervals]\n";
    out << "level = " << format_number(c.level) << "\n";
    out << "reps = " << c.reps << "\n";
    out << "mean_block_length = " << format_number(c.mean_block_length) << "\n";
    out << "[run]\n";
    out << "span_begin = " << c.span_begin << "\n";
    out << "span_end = " << c.span_end << "\n";
    out << "seed = " << c.seed << "\n";
    out << "jobs = " << c.jobs << "\n";
    out << "strict_intersection = " << (c.strict_intersection ? "true" : "false") << "\n";
    out << "season_first_year = " << c.season_first_year << "\n";
    out << "season_last_year = " << c.season_last_year << "\n";
    out << "[output]\n";
    out << "dir = " << c.out_dir << "\n";
    return out.str();
}

std::string config_hash(const RunConfig& config) {
    const std::string s = serialize_config(config);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace argoc
