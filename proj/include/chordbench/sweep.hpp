#pragma once

// Sweep harness: config parsing, the cell x trial work pool, CSV emission,
// and the summarize pass over emitted CSV.
//
// Config schema (JSON object):
//   {
//     "mode": "rational" | "float",
//     "family": "ig" | "lb" | "ppp" | "avg-lb" | "balanced" | "file",
//     "params": {
//       ig:       "H": [..], "L": [..], "k": [..], "j": [..], "perturb": bool
//       lb:       "eps": [..], "m": [..], "mu": [..], "c0": num, "perturb": bool
//       ppp:      "corners": [[ax,ay],[bx,by],[cx,cy]], "nu": [..]
//       avg-lb:   "eps": [..]
//       balanced: "corners": ..., "n": [..], "gamma": [..],
//                 "tilt": "uniform"|"linear_x", "r0": num, "r1": num
//       file:     "paths": ["a.json", ...]
//     },
//     "eps": [..] | "auto",        // run epsilon; "auto" reads the generator's
//                                  // target from instance meta (ig: eps_L,
//                                  // lb: eps_L_star, avg-lb: eps)
//     "metrics": ["ratio", ...],   // or "metric": "ratio"
//     "delta": scalar,             // optional, default 0
//     "tiebreak": "leftmost" | "rightmost",
//     "trials": int,               // optional, default 1
//     "seed": uint64,              // optional, default 0
//     "opt_mode": "exact" | "greedy" | "auto",
//     "opt_cap": int,              // optional, default 24
//     "group_by": ["family", ...], // optional, summarize default
//     "out": "rows.csv"            // optional default output path
//   }
// Scalar grid entries may be JSON numbers or strings; rational values are
// "p/q" strings.  Cells enumerate row-major over the param lists in the order
// shown above, then eps, then metrics; trials innermost.

#include <cstdint>
#include <string>
#include <vector>

#include "chordbench/geometry.hpp"
#include "chordbench/io.hpp"
#include "chordbench/oracles.hpp"

namespace chordbench {

struct sweep_config {
    bool rational_mode = true;
    std::string family;

    // adversarial families (exact scalars kept as strings until use)
    std::vector<std::string> grid_H{"1"};
    std::vector<std::string> grid_L{"1"};
    std::vector<long> grid_k;
    std::vector<long> grid_j;
    std::vector<std::string> grid_gen_eps;  // lb / avg-lb generator epsilon
    std::vector<long> grid_m;
    std::vector<std::string> grid_mu{"1"};
    double c0 = 1.0;
    bool perturb = false;

    // stochastic families
    std::vector<double> grid_nu;
    std::vector<long> grid_n;
    std::vector<double> grid_gamma{0.0};
    std::string tilt = "uniform";
    double r0 = 1.0;
    double r1 = 1.0;
    bool has_corners = false;
    double corners[6] = {0, 0, 0, 0, 0, 0};  // ax, ay, bx, by, cx, cy

    std::vector<std::string> grid_path;  // file family

    bool eps_auto = false;
    std::vector<std::string> grid_eps;
    std::vector<metric_kind> metrics;
    std::string delta = "0";
    tie_break tiebreak = tie_break::leftmost;
    long trials = 1;
    std::uint64_t seed = 0;
    std::string opt_mode = "auto";  // exact | greedy | auto
    long opt_cap = 24;
    std::vector<std::string> group_by;
    std::string out;
};

sweep_config parse_sweep_config(const ordered_json& j);
sweep_config read_sweep_config(const std::string& path);

// One emitted row; every field is already formatted.  Missing parameters stay
// empty.  ratio_exact is only emitted in rational mode.
struct bench_row {
    std::string family, H, L, k, j, m, eps, mu, nu, gamma, delta, metric, seed, trial,
        chd_calls, opt_size, opt_mode, ratio, trace_depth, lowest_internal, runtime_ms, valid,
        ratio_exact;
};

std::string csv_header(bool rational_mode);
std::string csv_line(const bench_row& r, bool rational_mode);

struct sweep_result {
    bool rational_mode = true;
    std::vector<bench_row> rows;  // ordered by (grid index, trial)
    long cells = 0;
    bool any_invalid = false;

    std::string csv() const;
};

sweep_result run_sweep(const sweep_config& cfg);

// CHORD_BENCH_THREADS overrides the pool size; otherwise the OpenMP default.
int sweep_thread_count();

struct summary_table {
    std::string csv;
    std::string text;  // aligned for terminals
};

// Groups rows of an emitted CSV by the named columns and reports per group:
// count, mean/median/max ratio, mean calls, mean opt size, fraction of rows
// with opt_mode = exact.  Empty group_by aggregates everything into one row.
summary_table summarize_csv(const std::string& csv_text,
                            const std::vector<std::string>& group_by);

}  // namespace chordbench
