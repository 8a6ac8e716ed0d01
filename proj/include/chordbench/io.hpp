#pragma once

// JSON serialization: instance files, trace trees, and point-set files.
// Rational scalars travel as "p/q" strings so round-trips are bit-exact;
// float mode uses plain JSON numbers (shortest round-trip form).  Field
// order is stable everywhere so golden files can diff.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "chordbench/chord.hpp"
#include "chordbench/errors.hpp"
#include "chordbench/instance.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* instance_format_tag = "chord-bench/1";
inline constexpr const char* trace_format_tag = "chord-bench-trace/1";

namespace detail {

inline ordered_json scalar_to_json(const rational& v) { return format_rational(v); }
inline ordered_json scalar_to_json(double v) { return v; }

template <class S>
S scalar_from_json(const ordered_json& j);

template <>
inline rational scalar_from_json<rational>(const ordered_json& j) {
    if (!j.is_string())
        throw config_error("rational scalar must be a \"p/q\" string, got " + j.dump());
    const auto parsed = parse_rational(j.get<std::string>());
    if (!parsed) throw config_error("malformed rational scalar " + j.dump());
    return *parsed;
}

template <>
inline double scalar_from_json<double>(const ordered_json& j) {
    if (!j.is_number())
        throw config_error("float scalar must be a JSON number, got " + j.dump());
    return j.get<double>();
}

template <class S>
ordered_json point_to_json(const point<S>& p) {
    return ordered_json::array({scalar_to_json(p.x), scalar_to_json(p.y)});
}

template <class S>
point<S> point_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2)
        throw config_error("point must be a two-element array, got " + j.dump());
    return {scalar_from_json<S>(j[0]), scalar_from_json<S>(j[1])};
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw config_error("write to " + path + " failed");
}

inline ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path + ": malformed JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw config_error("write to " + path + " failed");
}

// --- instances ----------------------------------------------------------------

template <class S>
ordered_json instance_to_json(const instance<S>& inst) {
    ordered_json j;
    j["format"] = instance_format_tag;
    j["mode"] = scalar_traits<S>::mode_name();
    j["m"] = inst.m;
    auto pts = ordered_json::array();
    for (const auto& p : inst.points) pts.push_back(detail::point_to_json(p));
    j["points"] = std::move(pts);
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : inst.meta) meta[k] = v;
    j["meta"] = std::move(meta);
    return j;
}

inline std::string json_mode(const ordered_json& j) {
    if (!j.is_object() || !j.contains("mode") || !j["mode"].is_string())
        throw config_error("file has no \"mode\" field");
    return j["mode"].get<std::string>();
}

template <class S>
instance<S> instance_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("format") || j["format"] != instance_format_tag)
        throw config_error("not a " + std::string(instance_format_tag) + " instance file");
    if (json_mode(j) != scalar_traits<S>::mode_name())
        throw config_error("instance mode is \"" + json_mode(j) + "\", expected \"" +
                           scalar_traits<S>::mode_name() + "\"");
    if (!j.contains("m") || !j["m"].is_number_integer())
        throw config_error("instance \"m\" must be an integer");
    if (!j.contains("points") || !j["points"].is_array())
        throw config_error("instance \"points\" must be an array");
    std::vector<point<S>> pts;
    pts.reserve(j["points"].size());
    for (const auto& pj : j["points"]) pts.push_back(detail::point_from_json<S>(pj));
    std::map<std::string, std::string> meta;
    if (j.contains("meta")) {
        if (!j["meta"].is_object()) throw config_error("instance \"meta\" must be an object");
        for (const auto& [k, v] : j["meta"].items()) {
            if (!v.is_string()) throw config_error("meta values must be strings");
            meta[k] = v.template get<std::string>();
        }
    }
    return make_instance<S>(j["m"].get<int>(), std::move(pts), std::move(meta));
}

template <class S>
instance<S> read_instance(const std::string& path) {
    return instance_from_json<S>(load_json_file(path));
}

template <class S>
void write_instance(const std::string& path, const instance<S>& inst) {
    write_json_file(path, instance_to_json(inst));
}

// --- point-set files ----------------------------------------------------------

// Accepts a bare array of points, {"points": [...]}, or {"selected": [...]}
// (the latter makes a trace file usable directly as a set file).
template <class S>
std::vector<point<S>> point_set_from_json(const ordered_json& j) {
    const ordered_json* arr = nullptr;
    if (j.is_array()) {
        arr = &j;
    } else if (j.is_object()) {
        if (j.contains("mode") && json_mode(j) != scalar_traits<S>::mode_name())
            throw config_error("point set mode is \"" + json_mode(j) + "\", expected \"" +
                               scalar_traits<S>::mode_name() + "\"");
        if (j.contains("selected") && j["selected"].is_array()) arr = &j["selected"];
        else if (j.contains("points") && j["points"].is_array()) arr = &j["points"];
    }
    if (!arr)
        throw config_error("point set file must be an array or carry \"points\"/\"selected\"");
    std::vector<point<S>> pts;
    pts.reserve(arr->size());
    for (const auto& pj : *arr) pts.push_back(detail::point_from_json<S>(pj));
    return pts;
}

template <class S>
std::vector<point<S>> read_point_set(const std::string& path) {
    return point_set_from_json<S>(load_json_file(path));
}

// --- traces -------------------------------------------------------------------

namespace detail {

template <class S>
ordered_json slope_to_json(const query_slope<S>& lam) {
    if (lam.infinite) return "inf";
    return scalar_to_json(lam.value);
}

template <class S>
ordered_json node_to_json(const recursion_node<S>& node) {
    ordered_json j;
    j["depth"] = node.depth;
    j["triangle"] = ordered_json{{"l", point_to_json(node.tri.l)},
                                 {"r", point_to_json(node.tri.r)},
                                 {"s", point_to_json(node.tri.s)}};
    j["query"] = node.query ? slope_to_json(*node.query) : ordered_json(nullptr);
    j["answer"] = node.answer ? point_to_json(*node.answer) : ordered_json(nullptr);
    j["split"] = node.split;
    auto kids = ordered_json::array();
    for (const auto& c : node.children) kids.push_back(node_to_json(*c));
    j["children"] = std::move(kids);
    return j;
}

}  // namespace detail

template <class S>
ordered_json trace_to_json(const chord_result<S>& res) {
    ordered_json j;
    j["format"] = trace_format_tag;
    j["mode"] = scalar_traits<S>::mode_name();
    j["metric"] = metric_name(res.metric);
    j["epsilon"] = detail::scalar_to_json(res.eps);
    j["epsilon_internal"] = detail::scalar_to_json(res.eps_internal);
    j["comb_calls"] = res.comb_calls;
    auto sel = ordered_json::array();
    for (const auto& p : res.selected) sel.push_back(detail::point_to_json(p));
    j["selected"] = std::move(sel);
    const auto stats = trace_stats(res);
    auto areas = ordered_json::array();
    for (const auto& a : stats.per_level_area_max) areas.push_back(detail::scalar_to_json(a));
    j["stats"] = ordered_json{{"node_count", stats.node_count},
                              {"max_depth", stats.max_depth},
                              {"lowest_internal", stats.lowest_internal},
                              {"per_level_area_max", std::move(areas)}};
    j["root"] = res.root ? detail::node_to_json(*res.root) : ordered_json(nullptr);
    return j;
}

}  // namespace chordbench
