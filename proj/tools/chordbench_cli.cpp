// Command-line front end: generate instances, run the chord algorithm against
// a comb oracle, compute optimum baselines, verify candidate sets, duel the
// horizontal-metric adversary, and drive CSV sweeps.
//
// Exit codes: 0 success, 2 an INVALID result (failed verify, infeasible
// optimum, or any INVALID sweep row), 3 configuration error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "chordbench/chord.hpp"
#include "chordbench/errors.hpp"
#include "chordbench/generators.hpp"
#include "chordbench/io.hpp"
#include "chordbench/optimum.hpp"
#include "chordbench/oracles.hpp"
#include "chordbench/sweep.hpp"

using namespace chordbench;

namespace {

template <class S>
struct mode_tag {
    using type = S;
};

template <class F>
int dispatch_mode(const ordered_json& j, F&& fn) {
    const std::string mode = json_mode(j);
    if (mode == "rational") return fn(mode_tag<rational>{});
    if (mode == "float") return fn(mode_tag<double>{});
    throw config_error("unknown mode \"" + mode + "\"");
}

template <class S>
S parse_scalar_arg(const std::string& s, const std::string& what) {
    if constexpr (scalar_traits<S>::exact) {
        if (const auto r = parse_rational(s)) return *r;
        throw config_error(what + ": \"" + s + "\" is not a rational (use \"p/q\")");
    } else {
        if (const auto d = parse_double(s)) return *d;
        if (const auto r = parse_rational(s)) return r->get_d();
        throw config_error(what + ": \"" + s + "\" is not a number");
    }
}

metric_kind parse_metric_arg(const std::string& s) {
    const auto m = metric_from_name(s);
    if (!m) throw config_error("unknown metric \"" + s + "\"");
    return *m;
}

tie_break parse_tiebreak_arg(const std::string& s) {
    if (s == "leftmost") return tie_break::leftmost;
    if (s == "rightmost") return tie_break::rightmost;
    throw config_error("unknown tiebreak \"" + s + "\"");
}

template <class S>
ordered_json points_json(const std::vector<point<S>>& pts) {
    auto arr = ordered_json::array();
    for (const auto& p : pts) arr.push_back(detail::point_to_json(p));
    return arr;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(',', start);
        const auto piece = s.substr(start, pos == std::string::npos ? pos : pos - start);
        if (!piece.empty()) out.push_back(piece);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// --- gen ----------------------------------------------------------------------

struct gen_opts {
    std::string family, out;
    std::string H = "1", L = "1", mu = "1", eps;
    long k = 4, j = 1, m = 4, n = 100;
    double c0 = 1.0, nu = 1.0, gamma = 0.0, r0 = 1.0, r1 = 1.0;
    std::string tilt = "uniform";
    std::string corners;
    std::uint64_t seed = 0;
    bool perturb = false;
};

void fill_corners(const gen_opts& o, point<double>& a, point<double>& b, point<double>& c) {
    const auto parts = split_list(o.corners);
    if (parts.size() != 6)
        throw config_error("--corners wants six numbers: ax,ay,bx,by,cx,cy");
    double v[6];
    for (int i = 0; i < 6; ++i) {
        const auto d = parse_double(parts[i]);
        if (!d) throw config_error("--corners: \"" + parts[i] + "\" is not a number");
        v[i] = *d;
    }
    a = {v[0], v[1]};
    b = {v[2], v[3]};
    c = {v[4], v[5]};
}

int cmd_gen(const gen_opts& o) {
    if (o.family == "ig") {
        ig_params p;
        p.H = parse_scalar_arg<rational>(o.H, "--H");
        p.L = parse_scalar_arg<rational>(o.L, "--L");
        p.k = o.k;
        p.j = o.j;
        p.perturb = o.perturb;
        const auto inst = gen_ig(p);
        write_instance(o.out, inst);
        std::cout << "wrote " << o.out << " (" << inst.points.size() << " points, rational)\n";
        return 0;
    }
    if (o.family == "lb") {
        if (o.eps.empty()) throw config_error("gen: --eps is required for family lb");
        lb_params p;
        p.eps = parse_scalar_arg<rational>(o.eps, "--eps");
        p.m = o.m;
        p.mu = parse_scalar_arg<rational>(o.mu, "--mu");
        p.c0 = o.c0;
        p.perturb = o.perturb;
        const auto inst = gen_lb(p);
        write_instance(o.out, inst);
        std::cout << "wrote " << o.out << " (" << inst.points.size() << " points, rational, j*="
                  << inst.meta.at("j_star") << ", k*=" << inst.meta.at("k_star") << ")\n";
        return 0;
    }
    if (o.family == "ppp") {
        ppp_params p;
        fill_corners(o, p.a, p.b, p.c);
        p.nu = o.nu;
        p.seed = o.seed;
        const auto inst = gen_ppp(p);
        write_instance(o.out, inst);
        std::cout << "wrote " << o.out << " (" << inst.points.size() << " points, float)\n";
        return 0;
    }
    if (o.family == "avg-lb") {
        if (o.eps.empty()) throw config_error("gen: --eps is required for family avg-lb");
        const auto inst = gen_avg_lb(parse_scalar_arg<double>(o.eps, "--eps"), o.seed);
        write_instance(o.out, inst);
        std::cout << "wrote " << o.out << " (" << inst.points.size() << " points, float)\n";
        return 0;
    }
    if (o.family == "balanced") {
        balanced_params p;
        fill_corners(o, p.a, p.b, p.c);
        p.n = o.n;
        p.gamma = o.gamma;
        p.tilt = o.tilt == "linear_x" ? tilt_kind::linear_x : tilt_kind::uniform;
        if (o.tilt != "uniform" && o.tilt != "linear_x")
            throw config_error("unknown tilt \"" + o.tilt + "\"");
        p.r0 = o.r0;
        p.r1 = o.r1;
        p.seed = o.seed;
        const auto inst = gen_balanced(p);
        write_instance(o.out, inst);
        std::cout << "wrote " << o.out << " (" << inst.points.size() << " points, float)\n";
        return 0;
    }
    throw config_error("unknown family \"" + o.family + "\"");
}

// --- run ----------------------------------------------------------------------

int cmd_run(const std::string& instance_path, const std::string& eps_str,
            const std::string& metric_str, const std::string& delta_str,
            const std::string& tiebreak_str, const std::string& trace_path) {
    const auto j = load_json_file(instance_path);
    const auto metric = parse_metric_arg(metric_str);
    const auto tb = parse_tiebreak_arg(tiebreak_str);
    return dispatch_mode(j, [&](auto tag) {
        using S = typename decltype(tag)::type;
        const auto inst = instance_from_json<S>(j);
        const S eps = parse_scalar_arg<S>(eps_str, "--eps");
        chord_options<S> opts;
        opts.delta = parse_scalar_arg<S>(delta_str, "--delta");
        exact_oracle<S> oracle(inst, tb);
        const auto res = run_chord<S>(oracle, eps, metric, opts);
        const auto ver = verify_eps_cp(inst, res.selected, eps, metric);
        const auto stats = trace_stats(res);
        if (!trace_path.empty()) write_json_file(trace_path, trace_to_json(res));
        std::cout << "comb_calls: " << res.comb_calls << "\n"
                  << "selected_size: " << res.selected.size() << "\n"
                  << "selected: " << points_json(res.selected).dump() << "\n"
                  << "eps_internal: " << scalar_traits<S>::format(res.eps_internal) << "\n"
                  << "trace_depth: " << stats.max_depth << "\n"
                  << "lowest_internal: " << stats.lowest_internal << "\n"
                  << "verify: " << (ver.ok ? "OK" : "INVALID (" + ver.reason + ")") << "\n";
        return ver.ok ? 0 : 2;
    });
}

// --- opt ----------------------------------------------------------------------

int cmd_opt(const std::string& instance_path, const std::string& eps_str,
            const std::string& metric_str, const std::string& mode, long cap) {
    const auto j = load_json_file(instance_path);
    const auto metric = parse_metric_arg(metric_str);
    if (mode != "exact" && mode != "greedy" && mode != "auto")
        throw config_error("unknown opt mode \"" + mode + "\"");
    return dispatch_mode(j, [&](auto tag) {
        using S = typename decltype(tag)::type;
        const auto inst = instance_from_json<S>(j);
        const S eps = parse_scalar_arg<S>(eps_str, "--eps");
        bool use_exact = mode != "greedy";
        if (mode == "auto")
            use_exact = static_cast<long>(staircase_filter(inst.points).size()) <= cap;
        const auto r = use_exact ? opt_exact(inst, eps, metric, cap)
                                 : opt_greedy(inst, eps, metric);
        std::cout << "feasible: " << (r.feasible ? "yes" : "no") << "\n"
                  << "opt_size: " << r.size << "\n"
                  << "opt_mode: " << (use_exact ? "exact" : "greedy") << "\n"
                  << "witness: " << points_json(r.witness).dump() << "\n";
        return r.feasible ? 0 : 2;
    });
}

// --- verify -------------------------------------------------------------------

int cmd_verify(const std::string& instance_path, const std::string& set_path,
               const std::string& eps_str, const std::string& metric_str) {
    const auto j = load_json_file(instance_path);
    const auto metric = parse_metric_arg(metric_str);
    return dispatch_mode(j, [&](auto tag) {
        using S = typename decltype(tag)::type;
        const auto inst = instance_from_json<S>(j);
        const S eps = parse_scalar_arg<S>(eps_str, "--eps");
        const auto set = read_point_set<S>(set_path);
        const auto ver = verify_eps_cp(inst, set, eps, metric);
        std::cout << "verify: " << (ver.ok ? "OK" : "FAIL") << "\n";
        if (!ver.ok) std::cout << "reason: " << ver.reason << "\n";
        if (ver.has_coverage) {
            std::cout << "worst: " << scalar_traits<S>::format(ver.worst);
            if (ver.has_witness)
                std::cout << " at " << detail::point_to_json(ver.witness).dump();
            std::cout << "\n";
        }
        return ver.ok ? 0 : 2;
    });
}

// --- adversary ----------------------------------------------------------------

int cmd_adversary(long k, const std::string& strategy, const std::string& script_path,
                  const std::string& out_path) {
    duel_strategy strat;
    if (strategy == "chord") {
        strat = duel_strategy::chord;
    } else if (strategy == "bisection" || strategy == "bisect") {
        strat = duel_strategy::bisect;
    } else if (strategy == "file-script" || strategy == "script") {
        strat = duel_strategy::scripted;
    } else {
        throw config_error("unknown strategy \"" + strategy + "\"");
    }
    std::vector<query_slope<rational>> script;
    if (strat == duel_strategy::scripted) {
        if (script_path.empty())
            throw config_error("strategy file-script needs --script F (JSON array of slopes)");
        const auto sj = load_json_file(script_path);
        if (!sj.is_array()) throw config_error("--script must be a JSON array of slopes");
        for (const auto& e : sj) {
            if (!e.is_string()) throw config_error("script slopes must be strings");
            const std::string s = e.get<std::string>();
            if (s == "inf") {
                script.push_back(query_slope<rational>::infinity());
            } else {
                script.push_back(
                    query_slope<rational>::finite(parse_scalar_arg<rational>(s, "script")));
            }
        }
    }
    const auto duel = adversary_duel<rational>(static_cast<int>(k), strat, script);
    std::cout << "k: " << duel.k << "\n"
              << "queries: " << duel.queries.size() << "\n";
    for (std::size_t i = 0; i < duel.queries.size(); ++i) {
        const auto& err = duel.errors[i];
        std::cout << "  query " << i + 1 << ": lambda=" << format_slope(duel.queries[i])
                  << " certified_error=" << format_rational(err) << " (~" << err.get_d()
                  << ")\n";
    }
    const rational half(1, 2);
    const auto cover = coverage_error(duel.finalized.points, duel.witness,
                                      metric_kind::horizontal);
    const auto opt = opt_exact(duel.finalized, half, metric_kind::horizontal, 64);
    std::cout << "finalized_points: " << duel.finalized.points.size() << "\n"
              << "witness_size: " << duel.witness.size() << "\n"
              << "witness_error: " << format_rational(cover.worst) << " (~"
              << cover.worst.get_d() << ")\n"
              << "opt_exact(eps=1/2): " << opt.size << "\n";
    if (!out_path.empty()) {
        write_instance(out_path, duel.finalized);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

// --- bench / summarize --------------------------------------------------------

int cmd_bench(const std::string& config_path, const std::string& out_path) {
    auto cfg = read_sweep_config(config_path);
    if (!out_path.empty()) cfg.out = out_path;
    const auto res = run_sweep(cfg);
    const std::string csv = res.csv();
    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        write_text_file(cfg.out, csv);
        std::cout << "wrote " << cfg.out << " (" << res.rows.size() << " rows, " << res.cells
                  << " cells)\n";
        if (!res.rows.empty()) {
            const auto gb = cfg.group_by.empty()
                                ? std::vector<std::string>{"family", "metric", "eps"}
                                : cfg.group_by;
            std::cout << summarize_csv(csv, gb).text;
        }
    }
    return res.any_invalid ? 2 : 0;
}

int cmd_summarize(const std::string& in_path, const std::string& group_by,
                  const std::string& out_path) {
    const auto text = read_text_file(in_path);
    const auto s = summarize_csv(text, split_list(group_by));
    if (!out_path.empty()) write_text_file(out_path, s.csv);
    std::cout << s.text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"comb-query benchmark harness for epsilon-convex-position"};
    app.require_subcommand(1);

    gen_opts G;
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    gen->add_option("--family", G.family, "ig|lb|ppp|avg-lb|balanced")->required();
    gen->add_option("--out", G.out, "output instance path")->required();
    gen->add_option("--H", G.H, "ig: height (rational)");
    gen->add_option("--L", G.L, "ig: width (rational)");
    gen->add_option("--k", G.k, "ig: denominator parameter, k >= 2");
    gen->add_option("--j", G.j, "ig: interior points, 1 <= j <= k-1");
    gen->add_option("--eps", G.eps, "lb/avg-lb: target epsilon");
    gen->add_option("--m", G.m, "lb: coordinate exponent, m >= 4");
    gen->add_option("--mu", G.mu, "lb: ratio parameter, mu >= 1");
    gen->add_option("--c0", G.c0, "lb: j* scale constant");
    gen->add_option("--nu", G.nu, "ppp: intensity");
    gen->add_option("--n", G.n, "balanced: sample count");
    gen->add_option("--gamma", G.gamma, "balanced: allowed density imbalance");
    gen->add_option("--tilt", G.tilt, "balanced: uniform|linear_x");
    gen->add_option("--r0", G.r0, "balanced: tilt weight at left edge");
    gen->add_option("--r1", G.r1, "balanced: tilt weight at right edge");
    gen->add_option("--corners", G.corners, "ppp/balanced: ax,ay,bx,by,cx,cy");
    gen->add_option("--seed", G.seed, "stochastic families: RNG seed");
    gen->add_flag("--perturb", G.perturb, "ig/lb: break slope ties");

    std::string r_instance, r_eps, r_metric, r_delta = "0", r_tiebreak = "leftmost", r_trace;
    auto* run = app.add_subcommand("run", "run the chord algorithm on an instance");
    run->add_option("--instance", r_instance)->required();
    run->add_option("--eps", r_eps)->required();
    run->add_option("--metric", r_metric, "ratio|horizontal|hausdorff")->required();
    run->add_option("--delta", r_delta, "comb reply tolerance");
    run->add_option("--tiebreak", r_tiebreak, "leftmost|rightmost");
    run->add_option("--trace", r_trace, "write the recursion trace JSON here");

    std::string o_instance, o_eps, o_metric, o_mode = "exact";
    long o_cap = 24;
    auto* opt = app.add_subcommand("opt", "compute the optimum baseline");
    opt->add_option("--instance", o_instance)->required();
    opt->add_option("--eps", o_eps)->required();
    opt->add_option("--metric", o_metric, "ratio|horizontal|hausdorff")->required();
    opt->add_option("--mode", o_mode, "exact|greedy|auto");
    opt->add_option("--cap", o_cap, "exact-search candidate cap");

    std::string v_instance, v_set, v_eps, v_metric;
    auto* verify = app.add_subcommand("verify", "check a point set against an instance");
    verify->add_option("--instance", v_instance)->required();
    verify->add_option("--set", v_set, "JSON point set (or trace) file")->required();
    verify->add_option("--eps", v_eps)->required();
    verify->add_option("--metric", v_metric, "ratio|horizontal|hausdorff")->required();

    long a_k = 4;
    std::string a_strategy = "chord", a_script, a_out;
    auto* adversary = app.add_subcommand("adversary", "duel the horizontal-metric adversary");
    adversary->add_option("--k", a_k, "adversary budget, k >= 2")->required();
    adversary->add_option("--strategy", a_strategy, "chord|bisection|file-script");
    adversary->add_option("--script", a_script, "slope script for file-script");
    adversary->add_option("--out", a_out, "write the finalized instance here");

    std::string b_config, b_out;
    auto* bench = app.add_subcommand("bench", "run a sweep from a JSON config");
    bench->add_option("--config", b_config)->required();
    bench->add_option("--out", b_out, "CSV output path (overrides config)");

    std::string s_in, s_group = "family,metric,eps", s_out;
    auto* summarize = app.add_subcommand("summarize", "aggregate an emitted CSV");
    summarize->add_option("--in", s_in, "CSV produced by bench")->required();
    summarize->add_option("--group-by", s_group, "comma-separated column names");
    summarize->add_option("--out", s_out, "write the summary CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (gen->parsed()) return cmd_gen(G);
        if (run->parsed()) return cmd_run(r_instance, r_eps, r_metric, r_delta, r_tiebreak,
                                          r_trace);
        if (opt->parsed()) return cmd_opt(o_instance, o_eps, o_metric, o_mode, o_cap);
        if (verify->parsed()) return cmd_verify(v_instance, v_set, v_eps, v_metric);
        if (adversary->parsed()) return cmd_adversary(a_k, a_strategy, a_script, a_out);
        if (bench->parsed()) return cmd_bench(b_config, b_out);
        if (summarize->parsed()) return cmd_summarize(s_in, s_group, s_out);
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
