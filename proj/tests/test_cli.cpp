#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bt/experiments.hpp"
#include "bt/parallel.hpp"

using namespace bt;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(BTCLI_PATH) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path temp_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("bt-test-" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("integer and exponent list parsing") {
    CHECK(expr::parse_int_list("4:10:2") == std::vector<int>{4, 6, 8, 10});
    CHECK(expr::parse_int_list("10:12") == std::vector<int>{10, 11, 12});
    CHECK(expr::parse_int_list("7") == std::vector<int>{7});
    CHECK(expr::parse_int_list("1,5,9") == std::vector<int>{1, 5, 9});
    CHECK_THROWS(expr::parse_int_list(""));
    CHECK_THROWS(expr::parse_int_list("5:1"));
    CHECK_THROWS(expr::parse_int_list("4:10:0"));

    auto ps = expr::parse_p_list("2,7.5,inf");
    REQUIRE(ps.size() == 3);
    CHECK(ps[0] == LpExponent::finite(2.0));
    CHECK(ps[1] == LpExponent::finite(7.5));
    CHECK(ps[2].is_infinity());
    CHECK_THROWS(expr::parse_p_list(""));
}

TEST_CASE("catalog integrity and config round trip") {
    const auto& ids = expr::experiment_ids();
    CHECK(ids.size() == 16);
    for (const auto& id : ids) {
        CHECK_FALSE(expr::experiment_claim(id).empty());
        auto cfg = expr::default_config(id);
        CHECK(cfg.experiment == id);
        CHECK_FALSE(cfg.N_values.empty());
        // JSON round trip is the identity on the config.
        auto j = expr::config_to_json(cfg);
        auto back = expr::config_from_json(j, expr::ExperimentConfig{});
        CHECK(expr::config_to_json(back) == j);
        // Reduced configs stay inside the same experiment.
        CHECK(expr::reduced_config(id).experiment == id);
    }
    CHECK_THROWS(expr::default_config("no-such-experiment"));

    // Overrides apply on top of a base config.
    expr::ordered_json patch = {{"N", "4:6"}, {"p", "2,inf"}, {"seeds", 3}};
    auto cfg = expr::config_from_json(patch, expr::default_config("fock-norms"));
    CHECK(cfg.N_values == std::vector<int>{4, 5, 6});
    CHECK(cfg.p_values.size() == 2);
    CHECK(cfg.seeds == 3);
}

TEST_CASE("report structure from a small run") {
    auto cfg = expr::default_config("weyl-window");
    cfg.N_values = expr::parse_int_list("10:20");
    auto rep = expr::run_experiment(cfg);
    CHECK(rep.experiment == "weyl-window");
    CHECK(rep.pass);
    CHECK(rep.rows.size() == 11);

    auto j = expr::report_to_json(rep, false);
    CHECK(j.contains("experiment"));
    CHECK(j.contains("claim"));
    CHECK(j.contains("config"));
    CHECK(j.contains("rows"));
    CHECK(j.contains("fits"));
    CHECK(j.contains("pass"));
    CHECK_FALSE(j.contains("meta"));
    auto jm = expr::report_to_json(rep, true);
    CHECK(jm["meta"].contains("version"));
    CHECK(jm["meta"].contains("generated_at"));

    // Schema ships both embedded and as a file.
    auto schema = expr::ordered_json::parse(expr::report_schema_json());
    CHECK(schema["required"].size() == 6);
}

TEST_CASE("csv emission round-trips doubles bit-exactly") {
    expr::ExperimentReport rep;
    rep.experiment = "demo";
    expr::ordered_json r1 = {{"N", 10}, {"value", 0.1}, {"note", "plain"}};
    expr::ordered_json r2 = {{"N", 20}, {"value", 1.0 / 3.0}, {"note", "with,comma"}, {"extra", true}};
    rep.rows = {r1, r2};
    auto csv = expr::report_csv(rep);

    CHECK(csv.substr(0, csv.find('\n')) == "N,value,note,extra");
    CHECK(csv.find("\"with,comma\"") != std::string::npos);

    // Parse the second field of each data line back to a double.
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    auto f1 = line.find(','), f2 = line.find(',', f1 + 1);
    CHECK(std::stod(line.substr(f1 + 1, f2 - f1 - 1)) == 0.1);
    std::getline(is, line);
    f1 = line.find(','), f2 = line.find(',', f1 + 1);
    CHECK(std::stod(line.substr(f1 + 1, f2 - f1 - 1)) == 1.0 / 3.0);
}

TEST_CASE("svg emission carries series, fit and target lines") {
    auto cfg = expr::reduced_config("fock-sharpness");
    auto rep = expr::run_experiment(cfg);
    auto svg = expr::report_svg(rep);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<g class=\"series\" data-label=\"p=4\"") != std::string::npos);
    CHECK(svg.find("<g class=\"series\" data-label=\"p=inf\"") != std::string::npos);
    CHECK(svg.find("class=\"fit\"") != std::string::npos);
    CHECK(svg.find("class=\"target\"") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    auto dir = temp_dir("write");
    auto paths = expr::write_report(rep, dir.string(), {"json", "csv", "svg"});
    REQUIRE(paths.size() == 3);
    for (const auto& p : paths) CHECK(fs::exists(p));
}

TEST_CASE("reports are byte-identical across thread counts") {
    for (const char* id : {"weyl-window", "cpn-spectrum"}) {
        auto cfg = expr::reduced_config(id);
        setenv("BT_THREADS", "1", 1);
        auto r1 = expr::report_to_json(expr::run_experiment(cfg), false).dump(2);
        setenv("BT_THREADS", "8", 1);
        auto r8 = expr::report_to_json(expr::run_experiment(cfg), false).dump(2);
        unsetenv("BT_THREADS");
        CHECK(r1 == r8);
    }
}

TEST_CASE("thread count is clamped and env-driven") {
    setenv("BT_THREADS", "3", 1);
    CHECK(bt::thread_count() == 3);
    setenv("BT_THREADS", "0", 1);
    CHECK(bt::thread_count() == 1);
    setenv("BT_THREADS", "9999", 1);
    CHECK(bt::thread_count() == 64);
    unsetenv("BT_THREADS");
    CHECK(bt::thread_count() >= 1);

    // parallel_for covers every index exactly once.
    std::vector<int> hits(100, 0);
    bt::parallel_for(100, [&](int i) { hits[i]++; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("binary exit codes and outputs") {
    CHECK(run_cli("--list") == 0);
    CHECK(run_cli("--help") == 0);

    auto dir = temp_dir("cli");
    std::string out = " --out " + dir.string();
    CHECK(run_cli("--experiment weyl-window --N 10:40 --format json,csv,svg" + out) == 0);
    CHECK(fs::exists(dir / "weyl-window.json"));
    CHECK(fs::exists(dir / "weyl-window.csv"));
    CHECK(fs::exists(dir / "weyl-window.svg"));

    std::ifstream in(dir / "weyl-window.json");
    auto j = expr::ordered_json::parse(in);
    CHECK(j["experiment"] == "weyl-window");
    CHECK(j["pass"] == true);
    CHECK(j["rows"].size() == 31);

    // Criterion failure: a window too narrow to catch any level.
    CHECK(run_cli("--experiment weyl-window --N 11:11 --C 0.001" + out) == 2);
    // Usage and numeric errors.
    CHECK(run_cli("--experiment no-such-id" + out) == 1);
    CHECK(run_cli("--experiment weyl-window --N 0:0" + out) == 1);
    CHECK(run_cli("") == 1);

    // Config file merge with flag override.
    auto cfgp = dir / "cfg.json";
    std::ofstream(cfgp) << R"({"N": "10:14", "C": 2.5})";
    CHECK(run_cli("--experiment weyl-window --config " + cfgp.string() + " --C 1.0" + out) == 0);
    std::ifstream in2(dir / "weyl-window.json");
    auto j2 = expr::ordered_json::parse(in2);
    CHECK(j2["rows"].size() == 5);
    CHECK(j2["config"]["C"] == 1.0);
}
