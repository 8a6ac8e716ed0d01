#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chordbench/rng.hpp"
#include "chordbench/sweep.hpp"

using namespace chordbench;

namespace {

rational rat(long n, long d = 1) {
    rational r(n, d);
    r.canonicalize();
    return r;
}

sweep_config config_from(const char* text) { return parse_sweep_config(ordered_json::parse(text)); }

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// runtime_ms is the one legitimately non-reproducible column
std::string blank_runtime(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    bool first = true;
    while (std::getline(in, line)) {
        auto f = fields_of(line);
        if (!first && f.size() > 20) f[20] = "x";
        first = false;
        std::string joined;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i) joined += ',';
            joined += f[i];
        }
        out += joined;
        out += '\n';
    }
    return out;
}

const char* reference_config = R"({
    "mode": "rational",
    "family": "ig",
    "params": {"k": [4], "j": [1, 2, 3]},
    "eps": ["1/4", "1/2"],
    "metrics": ["horizontal", "ratio"],
    "trials": 2
})";

}  // namespace

TEST_CASE("csv header is the documented column list") {
    CHECK(csv_header(true) ==
          "family,H,L,k,j,m,eps,mu,nu,gamma,delta,metric,seed,trial,chd_calls,opt_size,"
          "opt_mode,ratio,trace_depth,lowest_internal,runtime_ms,valid,ratio_exact");
    CHECK(csv_header(false) ==
          "family,H,L,k,j,m,eps,mu,nu,gamma,delta,metric,seed,trial,chd_calls,opt_size,"
          "opt_mode,ratio,trace_depth,lowest_internal,runtime_ms,valid");
}

TEST_CASE("single staircase cell reproduces the module numbers") {
    const auto cfg = config_from(R"({
        "mode": "rational",
        "family": "ig",
        "params": {"k": 4, "j": 3},
        "eps": "1/2",
        "metric": "horizontal"
    })");
    const auto res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 1);
    const auto& r = res.rows[0];
    CHECK(r.family == "ig");
    CHECK(r.H == "1");
    CHECK(r.L == "1");
    CHECK(r.k == "4");
    CHECK(r.j == "3");
    CHECK(r.m == "1");
    CHECK(r.eps == "1/2");
    CHECK(r.mu.empty());
    CHECK(r.nu.empty());
    CHECK(r.gamma.empty());
    CHECK(r.delta == "0");
    CHECK(r.metric == "horizontal");
    CHECK(r.seed == std::to_string(stream_seed(0, 0)));
    CHECK(r.trial == "0");
    CHECK(r.chd_calls == "5");
    CHECK(r.opt_size == "3");
    CHECK(r.opt_mode == "exact");
    CHECK(r.ratio == "1.66666666667");
    CHECK(r.ratio_exact == "5/3");
    CHECK(r.trace_depth == "2");
    CHECK(r.lowest_internal == "1");
    CHECK(r.valid == "OK");
    CHECK(!res.any_invalid);

    // same cell through the generator-supplied target epsilon
    const auto auto_cfg = config_from(R"({
        "mode": "rational",
        "family": "ig",
        "params": {"k": 4, "j": 3},
        "eps": "auto",
        "metric": "horizontal"
    })");
    const auto auto_res = run_sweep(auto_cfg);
    REQUIRE(auto_res.rows.size() == 1);
    CHECK(auto_res.rows[0].eps == "1/2");
    CHECK(auto_res.rows[0].chd_calls == "5");
    CHECK(auto_res.rows[0].ratio_exact == "5/3");
}

TEST_CASE("cells enumerate row-major with trials innermost") {
    const auto cfg = config_from(reference_config);
    const auto res = run_sweep(cfg);
    CHECK(res.cells == 12);
    REQUIRE(res.rows.size() == 24);
    CHECK(res.rows[0].j == "1");
    CHECK(res.rows[0].eps == "1/4");
    CHECK(res.rows[0].metric == "horizontal");
    CHECK(res.rows[0].trial == "0");
    CHECK(res.rows[1].trial == "1");
    CHECK(res.rows[2].metric == "ratio");
    CHECK(res.rows[4].eps == "1/2");
    CHECK(res.rows[4].metric == "horizontal");
    CHECK(res.rows[8].j == "2");
    CHECK(res.rows[8].eps == "1/4");
    for (const auto& r : res.rows) {
        CHECK(r.valid == "OK");
        CHECK(r.opt_mode == "exact");
        CHECK(std::stol(r.lowest_internal) <= std::stol(r.opt_size));
    }
    // identical (family, params, seed) cells in different trials re-run identically
    CHECK(res.rows[0].chd_calls == res.rows[1].chd_calls);
    CHECK(res.rows[0].opt_size == res.rows[1].opt_size);
}

TEST_CASE("zero trials give an empty sweep") {
    auto cfg = config_from(reference_config);
    cfg.trials = 0;
    const auto res = run_sweep(cfg);
    CHECK(res.rows.empty());
    CHECK(!res.any_invalid);
    CHECK(res.csv() == csv_header(true) + "\n");
}

TEST_CASE("sweep output is byte-deterministic and thread-count independent") {
    const auto cfg = config_from(reference_config);
    const std::string one = blank_runtime(run_sweep(cfg).csv());
    const std::string two = blank_runtime(run_sweep(cfg).csv());
    CHECK(one == two);

    setenv("CHORD_BENCH_THREADS", "1", 1);
    CHECK(sweep_thread_count() == 1);
    const std::string serial = blank_runtime(run_sweep(cfg).csv());
    setenv("CHORD_BENCH_THREADS", "2", 1);
    CHECK(sweep_thread_count() == 2);
    const std::string pooled = blank_runtime(run_sweep(cfg).csv());
    unsetenv("CHORD_BENCH_THREADS");
    CHECK(serial == one);
    CHECK(pooled == one);
}

TEST_CASE("csv lines parse back into the emitted rows") {
    const auto cfg = config_from(reference_config);
    const auto res = run_sweep(cfg);
    std::istringstream in(res.csv());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == csv_header(true));
    for (const auto& r : res.rows) {
        REQUIRE(std::getline(in, line));
        const auto f = fields_of(line);
        REQUIRE(f.size() == 23);
        CHECK(f[0] == r.family);
        CHECK(f[3] == r.k);
        CHECK(f[4] == r.j);
        CHECK(f[6] == r.eps);
        CHECK(f[11] == r.metric);
        CHECK(f[12] == r.seed);
        CHECK(f[13] == r.trial);
        CHECK(f[14] == r.chd_calls);
        CHECK(f[15] == r.opt_size);
        CHECK(f[17] == r.ratio);
        CHECK(f[21] == r.valid);
        CHECK(f[22] == r.ratio_exact);
    }
    CHECK(!std::getline(in, line));
}

TEST_CASE("uncoverable file instance marks its row invalid") {
    const std::string path = "/tmp/chordbench_sweep_invalid.json";
    const auto fixture = make_instance<rational>(
        2, {point<rational>{rat(1), rat(4)}, point<rational>{rat(3), rat(4)},
            point<rational>{rat(4), rat(1)}});
    write_instance(path, fixture);

    std::string text = R"({
        "mode": "rational",
        "family": "file",
        "params": {"paths": ["PATH"]},
        "eps": "1/10",
        "metric": "hausdorff"
    })";
    text.replace(text.find("PATH"), 4, path);
    const auto res = run_sweep(config_from(text.c_str()));
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].valid == "INVALID");
    CHECK(res.rows[0].opt_size == "0");
    CHECK(res.rows[0].ratio.empty());
    CHECK(res.rows[0].ratio_exact.empty());
    CHECK(res.any_invalid);

    // the same point set is fine when covering only needs the ratio metric
    text = R"({
        "mode": "rational",
        "family": "file",
        "params": {"paths": ["PATH"]},
        "eps": "1/10",
        "metric": "ratio"
    })";
    text.replace(text.find("PATH"), 4, path);
    const auto ok = run_sweep(config_from(text.c_str()));
    REQUIRE(ok.rows.size() == 1);
    CHECK(ok.rows[0].valid == "OK");
    CHECK(!ok.any_invalid);
    std::remove(path.c_str());
}

TEST_CASE("auto opt mode respects the pareto cap") {
    const char* base = R"({
        "mode": "rational",
        "family": "ig",
        "params": {"k": 26, "j": 24},
        "eps": "auto",
        "metric": "horizontal"
    })";
    const auto res = run_sweep(config_from(base));
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].opt_mode == "greedy");  // 27 Pareto points, default cap 24
    CHECK(res.rows[0].valid == "OK");

    auto cfg = config_from(base);
    cfg.opt_cap = 32;
    const auto lifted = run_sweep(cfg);
    CHECK(lifted.rows[0].opt_mode == "exact");
    CHECK(std::stol(lifted.rows[0].opt_size) <= std::stol(res.rows[0].opt_size));
}

TEST_CASE("float sweep drops the exact-ratio column and still verifies") {
    const auto cfg = config_from(R"({
        "mode": "float",
        "family": "avg-lb",
        "params": {"eps": [0.0625]},
        "eps": "auto",
        "metric": "ratio",
        "trials": 3,
        "opt_cap": 64
    })");
    const auto res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 3);
    std::istringstream in(res.csv());
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == csv_header(false));
    for (const auto& r : res.rows) {
        CHECK(r.valid == "OK");
        CHECK(r.eps == "0.0625");
        CHECK(!r.ratio.empty());
        CHECK(r.ratio_exact.empty());
        CHECK(r.nu == format_double(256.0));
    }
    // different trials draw different realizations
    CHECK(res.rows[0].seed != res.rows[1].seed);
}

TEST_CASE("summarize recomputes the per-group statistics") {
    const auto res = run_sweep(config_from(reference_config));
    const auto table = summarize_csv(res.csv(), {"j"});

    // independent pass over the rows
    struct agg {
        long count = 0;
        std::vector<double> ratios;
        double calls = 0, opt = 0;
    };
    std::map<std::string, agg> expect;
    for (const auto& r : res.rows) {
        auto& a = expect[r.j];
        ++a.count;
        a.ratios.push_back(*parse_double(r.ratio));
        a.calls += *parse_double(r.chd_calls);
        a.opt += *parse_double(r.opt_size);
    }

    std::istringstream in(table.csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "j,count,mean_ratio,median_ratio,max_ratio,mean_calls,mean_opt,frac_exact");
    long groups_seen = 0;
    while (std::getline(in, line)) {
        const auto f = fields_of(line);
        REQUIRE(f.size() == 8);
        REQUIRE(expect.count(f[0]));
        auto a = expect[f[0]];
        ++groups_seen;
        CHECK(f[1] == std::to_string(a.count));
        std::sort(a.ratios.begin(), a.ratios.end());
        double sum = 0;
        for (const double v : a.ratios) sum += v;
        const std::size_t n = a.ratios.size();
        const double median =
            n % 2 == 1 ? a.ratios[n / 2] : (a.ratios[n / 2 - 1] + a.ratios[n / 2]) / 2;
        CHECK(f[2] == format_double(sum / static_cast<double>(n)));
        CHECK(f[3] == format_double(median));
        CHECK(f[4] == format_double(a.ratios.back()));
        CHECK(f[5] == format_double(a.calls / static_cast<double>(a.count)));
        CHECK(f[6] == format_double(a.opt / static_cast<double>(a.count)));
        CHECK(f[7] == format_double(1.0));
    }
    CHECK(groups_seen == 3);

    // a group of identical ratios collapses to that ratio
    const auto single = summarize_csv(res.csv(), {"j", "eps", "metric"});
    std::istringstream sin(single.csv);
    REQUIRE(std::getline(sin, line));
    while (std::getline(sin, line)) {
        const auto f = fields_of(line);
        REQUIRE(f.size() == 10);
        CHECK(f[3] == std::to_string(2));
        CHECK(f[4] == f[6]);  // mean == max when both trials agree
        CHECK(f[4] == f[5]);
    }

    CHECK_THROWS_WITH_AS(summarize_csv("", {}), "summarize: empty CSV", config_error);
    CHECK_THROWS_WITH_AS(summarize_csv(res.csv(), {"flavor"}),
                         "summarize: unknown group_by column \"flavor\"", config_error);
}

TEST_CASE("config validation catches the usual mistakes") {
    CHECK_THROWS_WITH_AS(parse_sweep_config(ordered_json::array()),
                         "sweep config must be a JSON object", config_error);
    CHECK_THROWS_WITH_AS(config_from(R"({"family": "ig"})"),
                         "config: needs \"mode\": \"rational\" or \"float\"", config_error);
    CHECK_THROWS_WITH_AS(config_from(R"({"mode": "rational", "family": "squares"})"),
                         "config: unknown family \"squares\"", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ppp"})"),
        "config: family ppp runs in float mode", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ig", "params": {"j": 3}})"),
        "config: missing \"k\"", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ig", "params": {"k": 4, "j": 3}})"),
        "config: needs \"eps\" (grid or \"auto\")", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(
            R"({"mode": "rational", "family": "ig", "params": {"k": 4, "j": 3}, "eps": "1/2"})"),
        "config: needs \"metric\" or \"metrics\"", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ig", "params": {"k": 4, "j": 3},
                        "eps": "1/2", "metric": "manhattan"})"),
        "config: unknown metric \"manhattan\"", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ig", "params": {"k": 4, "j": 3},
                        "eps": "1/2", "metric": "ratio", "trials": -1})"),
        "config: \"trials\" must be a non-negative integer", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "float", "family": "ppp",
                        "params": {"corners": [[1,1],[5,1],[1,5]], "nu": 2}, "eps": "auto",
                        "metric": "ratio"})"),
        "config: eps \"auto\" is not defined for family ppp", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "float", "family": "ppp",
                        "params": {"corners": [[1,1],[5,1]], "nu": 2}, "eps": "1/4",
                        "metric": "ratio"})"),
        "config: corners must be [[ax,ay],[bx,by],[cx,cy]]", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "float", "family": "balanced",
                        "params": {"corners": [[1,1],[5,1],[1,5]], "n": 10, "tilt": "radial"},
                        "eps": "1/4", "metric": "ratio"})"),
        "config: unknown tilt \"radial\"", config_error);
    CHECK_THROWS_WITH_AS(
        config_from(R"({"mode": "rational", "family": "ig", "params": {"k": 4, "j": 3},
                        "eps": "1/2", "metric": "ratio", "opt_mode": "psychic"})"),
        "config: unknown opt_mode \"psychic\"", config_error);
}

TEST_CASE("sweep time grows roughly linearly in the cell count") {
    const char* small_cfg = R"({
        "mode": "rational",
        "family": "ig",
        "params": {"k": [16], "j": [12]},
        "eps": "auto",
        "metric": "horizontal",
        "trials": 30
    })";
    const char* big_cfg = R"({
        "mode": "rational",
        "family": "ig",
        "params": {"k": [16], "j": [12]},
        "eps": "auto",
        "metric": "horizontal",
        "trials": 60
    })";
    const auto cfg_small = config_from(small_cfg);
    const auto cfg_big = config_from(big_cfg);
    run_sweep(cfg_small);  // warm caches before timing

    const auto t0 = std::chrono::steady_clock::now();
    const auto small = run_sweep(cfg_small);
    const auto t1 = std::chrono::steady_clock::now();
    const auto big = run_sweep(cfg_big);
    const auto t2 = std::chrono::steady_clock::now();
    CHECK(small.rows.size() == 30);
    CHECK(big.rows.size() == 60);
    const double ms_small =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
    const double ms_big =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t2 - t1).count();
    CHECK(ms_big <= 3 * ms_small + 50.0);
}
