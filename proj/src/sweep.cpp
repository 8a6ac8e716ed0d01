#include "chordbench/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <map>
#include <sstream>
#include <type_traits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "chordbench/chord.hpp"
#include "chordbench/generators.hpp"
#include "chordbench/optimum.hpp"
#include "chordbench/rng.hpp"

namespace chordbench {

namespace {

// ---- config parsing ----------------------------------------------------------

std::string scalar_field(const ordered_json& v, const std::string& what) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return format_double(v.get<double>());
    throw config_error(what + ": expected a number or string, got " + v.dump());
}

std::vector<std::string> scalar_list(const ordered_json& obj, const std::string& key,
                                     bool required, std::vector<std::string> dflt = {}) {
    if (!obj.contains(key)) {
        if (required) throw config_error("config: missing \"" + key + "\"");
        return dflt;
    }
    const auto& v = obj[key];
    std::vector<std::string> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(scalar_field(e, key));
    } else {
        out.push_back(scalar_field(v, key));
    }
    if (out.empty()) throw config_error("config: \"" + key + "\" grid is empty");
    return out;
}

std::vector<long> long_list(const ordered_json& obj, const std::string& key, bool required,
                            std::vector<long> dflt = {}) {
    std::vector<long> out;
    for (const auto& s : scalar_list(obj, key, required, {})) {
        try {
            std::size_t used = 0;
            const long v = std::stol(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            out.push_back(v);
        } catch (const std::exception&) {
            throw config_error("config: \"" + key + "\" entry \"" + s + "\" is not an integer");
        }
    }
    if (out.empty()) return dflt;
    return out;
}

std::vector<double> double_list(const ordered_json& obj, const std::string& key, bool required,
                                std::vector<double> dflt = {}) {
    std::vector<double> out;
    for (const auto& s : scalar_list(obj, key, required, {})) {
        const auto v = parse_double(s);
        if (!v) throw config_error("config: \"" + key + "\" entry \"" + s + "\" is not a number");
        out.push_back(*v);
    }
    if (out.empty()) return dflt;
    return out;
}

void parse_corners(const ordered_json& params, sweep_config& cfg) {
    if (!params.contains("corners"))
        throw config_error("config: family " + cfg.family + " needs params.corners");
    const auto& c = params["corners"];
    const bool shape_ok = c.is_array() && c.size() == 3;
    if (!shape_ok) throw config_error("config: corners must be [[ax,ay],[bx,by],[cx,cy]]");
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& p = c[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw config_error("config: corners must be [[ax,ay],[bx,by],[cx,cy]]");
        cfg.corners[2 * i] = p[0].get<double>();
        cfg.corners[2 * i + 1] = p[1].get<double>();
    }
    cfg.has_corners = true;
}

// ---- scalar parsing at use sites ---------------------------------------------

rational parse_rational_checked(const std::string& s, const std::string& what) {
    const auto v = parse_rational(s);
    if (!v) throw config_error(what + ": \"" + s + "\" is not a rational (use \"p/q\")");
    return *v;
}

template <class S>
S parse_scalar_flex(const std::string& s, const std::string& what) {
    if constexpr (std::is_same_v<S, rational>) {
        return parse_rational_checked(s, what);
    } else {
        if (const auto d = parse_double(s)) return *d;
        if (const auto r = parse_rational(s)) return r->get_d();
        throw config_error(what + ": \"" + s + "\" is not a number");
    }
}

// ---- cell enumeration --------------------------------------------------------

struct param_combo {
    std::string H, L, mu, gen_eps, path;
    long k = 0, jj = 0, m = 0, n = 0;
    double nu = 0, gamma = 0;
};

std::vector<param_combo> enumerate_params(const sweep_config& cfg) {
    std::vector<param_combo> out;
    param_combo pc;
    if (cfg.family == "ig") {
        for (const auto& H : cfg.grid_H)
            for (const auto& L : cfg.grid_L)
                for (long k : cfg.grid_k)
                    for (long j : cfg.grid_j) {
                        pc.H = H, pc.L = L, pc.k = k, pc.jj = j;
                        out.push_back(pc);
                    }
    } else if (cfg.family == "lb") {
        for (const auto& e : cfg.grid_gen_eps)
            for (long m : cfg.grid_m)
                for (const auto& mu : cfg.grid_mu) {
                    pc.gen_eps = e, pc.m = m, pc.mu = mu;
                    out.push_back(pc);
                }
    } else if (cfg.family == "ppp") {
        for (double nu : cfg.grid_nu) {
            pc.nu = nu;
            out.push_back(pc);
        }
    } else if (cfg.family == "avg-lb") {
        for (const auto& e : cfg.grid_gen_eps) {
            pc.gen_eps = e;
            out.push_back(pc);
        }
    } else if (cfg.family == "balanced") {
        for (long n : cfg.grid_n)
            for (double g : cfg.grid_gamma) {
                pc.n = n, pc.gamma = g;
                out.push_back(pc);
            }
    } else {  // file
        for (const auto& p : cfg.grid_path) {
            pc.path = p;
            out.push_back(pc);
        }
    }
    return out;
}

// ---- per-item work -----------------------------------------------------------

template <class S>
instance<S> build_instance(const sweep_config& cfg, const param_combo& pc,
                           std::uint64_t item_seed) {
    if (cfg.family == "ig" || cfg.family == "lb") {
        instance<rational> base;
        if (cfg.family == "ig") {
            ig_params p;
            p.H = parse_rational_checked(pc.H, "H");
            p.L = parse_rational_checked(pc.L, "L");
            p.k = pc.k;
            p.j = pc.jj;
            p.perturb = cfg.perturb;
            base = gen_ig(p);
        } else {
            lb_params p;
            p.eps = parse_rational_checked(pc.gen_eps, "eps");
            p.m = pc.m;
            p.mu = parse_rational_checked(pc.mu, "mu");
            p.c0 = cfg.c0;
            p.perturb = cfg.perturb;
            base = gen_lb(p);
        }
        if constexpr (std::is_same_v<S, rational>) {
            return base;
        } else {
            return instance_to_float(base);
        }
    }
    if (cfg.family == "file") return read_instance<S>(pc.path);
    if constexpr (std::is_same_v<S, double>) {
        if (cfg.family == "ppp") {
            ppp_params p;
            p.a = {cfg.corners[0], cfg.corners[1]};
            p.b = {cfg.corners[2], cfg.corners[3]};
            p.c = {cfg.corners[4], cfg.corners[5]};
            p.nu = pc.nu;
            p.seed = item_seed;
            return gen_ppp(p);
        }
        if (cfg.family == "avg-lb")
            return gen_avg_lb(parse_scalar_flex<double>(pc.gen_eps, "eps"), item_seed);
        if (cfg.family == "balanced") {
            balanced_params p;
            p.a = {cfg.corners[0], cfg.corners[1]};
            p.b = {cfg.corners[2], cfg.corners[3]};
            p.c = {cfg.corners[4], cfg.corners[5]};
            p.n = pc.n;
            p.gamma = pc.gamma;
            p.tilt = cfg.tilt == "linear_x" ? tilt_kind::linear_x : tilt_kind::uniform;
            p.r0 = cfg.r0;
            p.r1 = cfg.r1;
            p.seed = item_seed;
            return gen_balanced(p);
        }
    }
    throw config_error("config: family " + cfg.family + " is not available in rational mode");
}

template <class S>
S resolve_eps(const sweep_config& cfg, const instance<S>& inst, const std::string& eps_str) {
    if (!cfg.eps_auto) return parse_scalar_flex<S>(eps_str, "eps");
    for (const char* key : {"eps_L_star", "eps_L", "eps"}) {
        const auto it = inst.meta.find(key);
        if (it != inst.meta.end()) return parse_scalar_flex<S>(it->second, "meta eps");
    }
    throw config_error("config: eps \"auto\" needs eps_L, eps_L_star, or eps in instance meta");
}

std::string meta_first(const std::map<std::string, std::string>& meta,
                       std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
        const auto it = meta.find(key);
        if (it != meta.end()) return it->second;
    }
    return {};
}

std::string sig12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

template <class S>
void run_item(const sweep_config& cfg, const param_combo& pc, const std::string& eps_str,
              metric_kind metric, std::uint64_t item_seed, long trial, bench_row& row) {
    row.family = cfg.family;
    row.metric = metric_name(metric);
    row.seed = std::to_string(item_seed);
    row.trial = std::to_string(trial);

    const instance<S> inst = build_instance<S>(cfg, pc, item_seed);
    row.H = meta_first(inst.meta, {"H", "H_star"});
    row.L = meta_first(inst.meta, {"L", "L_star"});
    row.k = meta_first(inst.meta, {"k", "k_star"});
    row.j = meta_first(inst.meta, {"j", "j_star"});
    row.mu = meta_first(inst.meta, {"mu"});
    row.nu = meta_first(inst.meta, {"nu"});
    row.gamma = meta_first(inst.meta, {"gamma"});
    row.m = std::to_string(inst.m);

    const S eps = resolve_eps<S>(cfg, inst, eps_str);
    const S delta = parse_scalar_flex<S>(cfg.delta, "delta");
    row.eps = scalar_traits<S>::format(eps);
    row.delta = scalar_traits<S>::format(delta);

    const auto t0 = std::chrono::steady_clock::now();
    exact_oracle<S> oracle(inst, cfg.tiebreak);
    chord_options<S> opts;
    opts.delta = delta;
    const auto chd = run_chord<S>(oracle, eps, metric, opts);

    bool use_exact = true;
    if (cfg.opt_mode == "greedy")
        use_exact = false;
    else if (cfg.opt_mode == "auto")
        use_exact = static_cast<long>(staircase_filter(inst.points).size()) <= cfg.opt_cap;
    const auto opt = use_exact ? opt_exact(inst, eps, metric, cfg.opt_cap)
                               : opt_greedy(inst, eps, metric);

    const auto ver = verify_eps_cp(inst, chd.selected, eps, metric);
    const auto t1 = std::chrono::steady_clock::now();

    const auto stats = trace_stats(chd);
    row.chd_calls = std::to_string(chd.comb_calls);
    row.opt_size = std::to_string(opt.size);
    row.opt_mode = use_exact ? "exact" : "greedy";
    row.trace_depth = std::to_string(stats.max_depth);
    row.lowest_internal = std::to_string(stats.lowest_internal);
    row.runtime_ms = std::to_string(
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    if (opt.feasible) {
        const S ratio = performance_ratio(chd, opt);
        row.ratio = sig12(scalar_traits<S>::to_double(ratio));
        if constexpr (scalar_traits<S>::exact) row.ratio_exact = scalar_traits<S>::format(ratio);
    }
    row.valid = (ver.ok && opt.feasible) ? "OK" : "INVALID";
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

// ---- public entry points -----------------------------------------------------

sweep_config parse_sweep_config(const ordered_json& j) {
    if (!j.is_object()) throw config_error("sweep config must be a JSON object");
    sweep_config cfg;
    try {
        if (!j.contains("mode") || !j["mode"].is_string())
            throw config_error("config: needs \"mode\": \"rational\" or \"float\"");
        const std::string mode = j["mode"].get<std::string>();
        if (mode != "rational" && mode != "float")
            throw config_error("config: unknown mode \"" + mode + "\"");
        cfg.rational_mode = mode == "rational";

        if (!j.contains("family") || !j["family"].is_string())
            throw config_error("config: needs \"family\"");
        cfg.family = j["family"].get<std::string>();
        const bool stochastic =
            cfg.family == "ppp" || cfg.family == "avg-lb" || cfg.family == "balanced";
        const bool known = stochastic || cfg.family == "ig" || cfg.family == "lb" ||
                           cfg.family == "file";
        if (!known) throw config_error("config: unknown family \"" + cfg.family + "\"");
        if (stochastic && cfg.rational_mode)
            throw config_error("config: family " + cfg.family + " runs in float mode");

        const ordered_json params =
            j.contains("params") ? j["params"] : ordered_json(ordered_json::object());
        if (!params.is_object()) throw config_error("config: \"params\" must be an object");

        if (cfg.family == "ig") {
            cfg.grid_H = scalar_list(params, "H", false, {"1"});
            cfg.grid_L = scalar_list(params, "L", false, {"1"});
            cfg.grid_k = long_list(params, "k", true);
            cfg.grid_j = long_list(params, "j", true);
            cfg.perturb = params.value("perturb", false);
        } else if (cfg.family == "lb") {
            cfg.grid_gen_eps = scalar_list(params, "eps", true);
            cfg.grid_m = long_list(params, "m", true);
            cfg.grid_mu = scalar_list(params, "mu", false, {"1"});
            cfg.c0 = params.value("c0", 1.0);
            cfg.perturb = params.value("perturb", false);
        } else if (cfg.family == "ppp") {
            parse_corners(params, cfg);
            cfg.grid_nu = double_list(params, "nu", true);
        } else if (cfg.family == "avg-lb") {
            cfg.grid_gen_eps = scalar_list(params, "eps", true);
        } else if (cfg.family == "balanced") {
            parse_corners(params, cfg);
            cfg.grid_n = long_list(params, "n", true);
            cfg.grid_gamma = double_list(params, "gamma", false, {0.0});
            cfg.tilt = params.value("tilt", std::string("uniform"));
            if (cfg.tilt != "uniform" && cfg.tilt != "linear_x")
                throw config_error("config: unknown tilt \"" + cfg.tilt + "\"");
            cfg.r0 = params.value("r0", 1.0);
            cfg.r1 = params.value("r1", 1.0);
        } else {
            cfg.grid_path = scalar_list(params, "paths", true);
        }

        if (!j.contains("eps")) throw config_error("config: needs \"eps\" (grid or \"auto\")");
        if (j["eps"].is_string() && j["eps"].get<std::string>() == "auto") {
            cfg.eps_auto = true;
            const bool has_meta_eps = cfg.family == "ig" || cfg.family == "lb" ||
                                      cfg.family == "avg-lb" || cfg.family == "file";
            if (!has_meta_eps)
                throw config_error("config: eps \"auto\" is not defined for family " +
                                   cfg.family);
        } else {
            cfg.grid_eps = scalar_list(j, "eps", true);
        }

        std::vector<std::string> metric_names;
        if (j.contains("metrics")) {
            metric_names = scalar_list(j, "metrics", true);
        } else if (j.contains("metric")) {
            metric_names.push_back(scalar_field(j["metric"], "metric"));
        } else {
            throw config_error("config: needs \"metric\" or \"metrics\"");
        }
        for (const auto& name : metric_names) {
            const auto mk = metric_from_name(name);
            if (!mk) throw config_error("config: unknown metric \"" + name + "\"");
            cfg.metrics.push_back(*mk);
        }

        if (j.contains("delta")) cfg.delta = scalar_field(j["delta"], "delta");
        if (j.contains("tiebreak")) {
            const std::string tb = scalar_field(j["tiebreak"], "tiebreak");
            if (tb == "leftmost") cfg.tiebreak = tie_break::leftmost;
            else if (tb == "rightmost") cfg.tiebreak = tie_break::rightmost;
            else throw config_error("config: unknown tiebreak \"" + tb + "\"");
        }
        if (j.contains("trials")) {
            if (!j["trials"].is_number_integer() || j["trials"].get<long long>() < 0)
                throw config_error("config: \"trials\" must be a non-negative integer");
            cfg.trials = j["trials"].get<long>();
        }
        if (j.contains("seed")) {
            if (!j["seed"].is_number_integer() ||
                (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() &&
                 j["seed"].get<long long>() < 0))
                throw config_error("config: \"seed\" must be a non-negative integer");
            cfg.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("opt_mode")) {
            cfg.opt_mode = scalar_field(j["opt_mode"], "opt_mode");
            if (cfg.opt_mode != "exact" && cfg.opt_mode != "greedy" && cfg.opt_mode != "auto")
                throw config_error("config: unknown opt_mode \"" + cfg.opt_mode + "\"");
        }
        if (j.contains("opt_cap")) {
            if (!j["opt_cap"].is_number_integer() || j["opt_cap"].get<long long>() < 1)
                throw config_error("config: \"opt_cap\" must be a positive integer");
            cfg.opt_cap = j["opt_cap"].get<long>();
        }
        if (j.contains("group_by")) cfg.group_by = scalar_list(j, "group_by", false);
        if (j.contains("out")) cfg.out = scalar_field(j["out"], "out");
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: malformed field: ") + e.what());
    }
    return cfg;
}

sweep_config read_sweep_config(const std::string& path) {
    return parse_sweep_config(load_json_file(path));
}

std::string csv_header(bool rational_mode) {
    std::string h =
        "family,H,L,k,j,m,eps,mu,nu,gamma,delta,metric,seed,trial,chd_calls,opt_size,"
        "opt_mode,ratio,trace_depth,lowest_internal,runtime_ms,valid";
    if (rational_mode) h += ",ratio_exact";
    return h;
}

std::string csv_line(const bench_row& r, bool rational_mode) {
    std::string s;
    const std::string* fields[] = {&r.family,   &r.H,         &r.L,
                                   &r.k,        &r.j,         &r.m,
                                   &r.eps,      &r.mu,        &r.nu,
                                   &r.gamma,    &r.delta,     &r.metric,
                                   &r.seed,     &r.trial,     &r.chd_calls,
                                   &r.opt_size, &r.opt_mode,  &r.ratio,
                                   &r.trace_depth, &r.lowest_internal, &r.runtime_ms,
                                   &r.valid};
    bool first = true;
    for (const auto* f : fields) {
        if (!first) s += ',';
        s += *f;
        first = false;
    }
    if (rational_mode) {
        s += ',';
        s += r.ratio_exact;
    }
    return s;
}

std::string sweep_result::csv() const {
    std::string out = csv_header(rational_mode);
    out += '\n';
    for (const auto& r : rows) {
        out += csv_line(r, rational_mode);
        out += '\n';
    }
    return out;
}

int sweep_thread_count() {
    if (const char* env = std::getenv("CHORD_BENCH_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

sweep_result run_sweep(const sweep_config& cfg) {
    sweep_result out;
    out.rational_mode = cfg.rational_mode;
    const auto combos = enumerate_params(cfg);
    const std::size_t ne = cfg.eps_auto ? 1 : cfg.grid_eps.size();
    const std::size_t nm = cfg.metrics.size();
    const std::size_t cells = combos.size() * ne * nm;
    out.cells = static_cast<long>(cells);
    const std::size_t trials = static_cast<std::size_t>(std::max<long>(cfg.trials, 0));
    const std::size_t total = cells * trials;
    out.rows.assign(total, {});
    if (total == 0) return out;
    std::vector<std::exception_ptr> errors(total);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(sweep_thread_count())
#endif
    for (long long i = 0; i < static_cast<long long>(total); ++i) {
        try {
            const std::size_t cell = static_cast<std::size_t>(i) / trials;
            const long trial = static_cast<long>(static_cast<std::size_t>(i) % trials);
            const std::size_t mi = cell % nm;
            const std::size_t ei = (cell / nm) % ne;
            const std::size_t ci = cell / (nm * ne);
            const std::uint64_t item_seed =
                stream_seed(cfg.seed, static_cast<std::uint64_t>(i));
            const std::string eps_str = cfg.eps_auto ? std::string() : cfg.grid_eps[ei];
            if (cfg.rational_mode)
                run_item<rational>(cfg, combos[ci], eps_str, cfg.metrics[mi], item_seed, trial,
                                   out.rows[static_cast<std::size_t>(i)]);
            else
                run_item<double>(cfg, combos[ci], eps_str, cfg.metrics[mi], item_seed, trial,
                                 out.rows[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (const auto& r : out.rows)
        if (r.valid == "INVALID") out.any_invalid = true;
    return out;
}

summary_table summarize_csv(const std::string& csv_text,
                            const std::vector<std::string>& group_by) {
    std::vector<std::string> lines;
    {
        std::istringstream in(csv_text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) lines.push_back(line);
        }
    }
    if (lines.empty()) throw config_error("summarize: empty CSV");
    const auto header = split_csv(lines.front());
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* need : {"ratio", "chd_calls", "opt_size", "opt_mode"})
        if (!col.count(need))
            throw config_error(std::string("summarize: CSV lacks column \"") + need + "\"");
    std::vector<std::size_t> group_idx;
    for (const auto& g : group_by) {
        const auto it = col.find(g);
        if (it == col.end())
            throw config_error("summarize: unknown group_by column \"" + g + "\"");
        group_idx.push_back(it->second);
    }

    struct group_agg {
        std::vector<std::string> key;
        long count = 0;
        std::vector<double> ratios;
        double sum_calls = 0;
        long n_calls = 0;
        double sum_opt = 0;
        long n_opt = 0;
        long n_exact = 0;
    };
    std::vector<group_agg> groups;
    std::map<std::string, std::size_t> by_key;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto fields = split_csv(lines[li]);
        if (fields.size() < header.size())
            throw config_error("summarize: malformed CSV row " + std::to_string(li));
        std::string key;
        std::vector<std::string> key_vals;
        for (const auto gi : group_idx) {
            key += fields[gi];
            key += '\x1f';
            key_vals.push_back(fields[gi]);
        }
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            it = by_key.emplace(key, groups.size()).first;
            groups.push_back({});
            groups.back().key = std::move(key_vals);
        }
        auto& g = groups[it->second];
        ++g.count;
        if (const auto v = parse_double(fields[col["ratio"]])) g.ratios.push_back(*v);
        if (const auto v = parse_double(fields[col["chd_calls"]])) {
            g.sum_calls += *v;
            ++g.n_calls;
        }
        if (const auto v = parse_double(fields[col["opt_size"]])) {
            g.sum_opt += *v;
            ++g.n_opt;
        }
        if (fields[col["opt_mode"]] == "exact") ++g.n_exact;
    }

    std::vector<std::string> out_header = group_by;
    for (const char* c : {"count", "mean_ratio", "median_ratio", "max_ratio", "mean_calls",
                          "mean_opt", "frac_exact"})
        out_header.push_back(c);
    std::vector<std::vector<std::string>> table;
    table.push_back(out_header);
    for (auto& g : groups) {
        std::vector<std::string> row = g.key;
        row.push_back(std::to_string(g.count));
        std::sort(g.ratios.begin(), g.ratios.end());
        if (g.ratios.empty()) {
            row.insert(row.end(), {"", "", ""});
        } else {
            double sum = 0;
            for (const double r : g.ratios) sum += r;
            const std::size_t n = g.ratios.size();
            const double median = n % 2 == 1 ? g.ratios[n / 2]
                                             : (g.ratios[n / 2 - 1] + g.ratios[n / 2]) / 2;
            row.push_back(format_double(sum / static_cast<double>(n)));
            row.push_back(format_double(median));
            row.push_back(format_double(g.ratios.back()));
        }
        row.push_back(g.n_calls ? format_double(g.sum_calls / g.n_calls) : "");
        row.push_back(g.n_opt ? format_double(g.sum_opt / g.n_opt) : "");
        row.push_back(format_double(g.count ? static_cast<double>(g.n_exact) / g.count : 0));
        table.push_back(std::move(row));
    }

    summary_table result;
    for (const auto& row : table) {
        bool first = true;
        for (const auto& f : row) {
            if (!first) result.csv += ',';
            result.csv += f;
            first = false;
        }
        result.csv += '\n';
    }
    std::vector<std::size_t> width(out_header.size(), 0);
    for (const auto& row : table)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) result.text += "  ";
            const bool numeric = i >= group_by.size();
            const std::string pad(width[i] - row[i].size(), ' ');
            result.text += numeric ? pad + row[i] : row[i] + pad;
        }
        while (!result.text.empty() && result.text.back() == ' ') result.text.pop_back();
        result.text += '\n';
    }
    return result;
}

}  // namespace chordbench
