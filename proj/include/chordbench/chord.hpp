#pragma once

// The chord search: recursively narrows the unknown lower envelope with comb
// queries until every undiscovered point is provably within eps of the chain
// spanned by the discovered ones.  The oracle is a black box; a transcript of
// (slope, reply) pairs is kept and every new reply is cross-checked against
// it, so a reply inconsistent with (1+delta)-approximate minimization raises
// a protocol error instead of corrupting the output.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chordbench/errors.hpp"
#include "chordbench/geometry.hpp"
#include "chordbench/instance.hpp"
#include "chordbench/oracles.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

template <class S>
struct recursion_node {
    int depth = 0;
    triangle<S> tri{};
    std::optional<query_slope<S>> query;
    std::optional<point<S>> answer;
    bool split = false;
    std::vector<std::unique_ptr<recursion_node<S>>> children;
};

template <class S>
struct chord_result {
    chain<S> selected;
    long comb_calls = 0;
    S eps{};
    S eps_internal{};
    S delta{};
    metric_kind metric = metric_kind::ratio;
    std::unique_ptr<recursion_node<S>> root;  // null when the root was degenerate
};

template <class S>
struct chord_options {
    S delta{};
    bool build_trace = true;
};

namespace detail {

inline int log2_inv_bound(const rational& eps) {
    if (eps >= 1) return 0;
    rational e = eps;
    e.canonicalize();
    const long nb = static_cast<long>(mpz_sizeinbase(e.get_num().get_mpz_t(), 2));
    const long db = static_cast<long>(mpz_sizeinbase(e.get_den().get_mpz_t(), 2));
    const long d = db - nb + 1;
    return d < 0 ? 0 : static_cast<int>(d);
}

inline int log2_inv_bound(double eps) {
    if (eps >= 1) return 0;
    return static_cast<int>(std::ceil(std::log2(1.0 / eps)));
}

// internal error bound: with an approximate oracle the search must aim lower,
// sqrt(1+eps) - 1 (rounded down), so that certification at eps_internal plus
// the oracle's (1+delta) slack still lands within (1+eps)
template <class S>
S internal_eps(const S& eps, const S& delta) {
    if (delta == 0) return eps;
    S root;
    if constexpr (scalar_traits<S>::exact) {
        root = rational_sqrt_down(S(1 + eps));
    } else {
        root = std::sqrt(1.0 + eps);
        if (root > 0) root = std::nextafter(root, 0.0);
    }
    S out = S(root - 1);
    if (out < 0) out = S(0);
    if (S((1 + delta) * (1 + out)) > S(1 + eps))
        throw config_error("run_chord: delta too large for this epsilon");
    return out;
}

template <class S>
S protocol_key(const query_slope<S>& lam, const point<S>& p) {
    if (lam.infinite) return p.x;
    if (lam.is_zero()) return p.y;
    return S(p.y + lam.value * p.x);
}

template <class S>
bool triangle_degenerate(const triangle<S>& t) {
    return t.l.x == t.r.x || t.l.y == t.r.y || triangle_area(t) == 0;
}

template <class S>
class chord_run {
  public:
    chord_run(comb_oracle<S>& oracle, const S& eps, metric_kind metric, const chord_options<S>& opts)
        : oracle_(oracle), metric_(metric), opts_(opts) {
        if (!(eps > 0)) throw config_error("run_chord: eps must be positive");
        if (opts.delta < 0) throw config_error("run_chord: delta must be >= 0");
        res_.eps = eps;
        res_.delta = opts.delta;
        res_.eps_internal = internal_eps(eps, opts.delta);
        res_.metric = metric;
        depth_cap_ = 8L * (oracle.m() + log2_inv_bound(res_.eps_internal > 0 ? res_.eps_internal : eps) + 8);
    }

    chord_result<S> run() {
        const point<S> a = ask(query_slope<S>::infinity());
        const point<S> b = ask(query_slope<S>::finite(S(0)));
        if (a == b) {
            res_.selected = {a};
            return std::move(res_);
        }
        triangle<S> root{a, b, point<S>{a.x, b.y}};
        if (triangle_degenerate(root)) {
            votes_.push_back(a);
            votes_.push_back(b);
        } else {
            res_.root = recurse(root, 0);
        }
        sort_points(votes_);
        votes_.erase(std::unique(votes_.begin(), votes_.end()), votes_.end());
        res_.selected = convex_envelope(votes_);
        return std::move(res_);
    }

  private:
    point<S> ask(const query_slope<S>& lam) {
        point<S> q = oracle_.answer(lam);
        ++res_.comb_calls;
        const S one_plus_delta = S(1 + opts_.delta);
        for (const auto& [plam, pq] : transcript_) {
            // the new reply must be near-minimal at its own slope ...
            if (!scalar_traits<S>::within(protocol_key(lam, q),
                                          S(one_plus_delta * protocol_key(lam, pq))))
                throw protocol_error("comb reply not approximately minimal at slope " +
                                     format_slope(lam));
            // ... and must not reveal that an earlier reply wasn't
            if (!scalar_traits<S>::within(protocol_key(plam, pq),
                                          S(one_plus_delta * protocol_key(plam, q))))
                throw protocol_error("comb reply contradicts earlier reply at slope " +
                                     format_slope(plam));
        }
        transcript_.emplace_back(lam, q);
        return q;
    }

    std::unique_ptr<recursion_node<S>> recurse(const triangle<S>& tri, int depth) {
        if (depth > depth_cap_)
            throw protocol_error("recursion depth exceeded certified budget");
        auto node = opts_.build_trace ? std::make_unique<recursion_node<S>>() : nullptr;
        if (node) {
            node->depth = depth;
            node->tri = tri;
        }

        // (1) the inner corner bounds everything still hidden in this triangle
        if (segment_within(tri.s, tri.l, tri.r, metric_, res_.eps_internal)) {
            votes_.push_back(tri.l);
            votes_.push_back(tri.r);
            return node;
        }

        // (2) probe the chord slope
        const query_slope<S> lam =
            query_slope<S>::finite(S((tri.l.y - tri.r.y) / (tri.r.x - tri.l.x)));
        const point<S> q = ask(lam);
        if (node) {
            node->query = lam;
            node->answer = q;
        }

        if (q == tri.l || q == tri.r) {  // nothing strictly between the corners
            votes_.push_back(tri.l);
            votes_.push_back(tri.r);
            return node;
        }

        // (3) the reply itself may already be close enough; keep it
        if (segment_within(q, tri.l, tri.r, metric_, res_.eps_internal)) {
            votes_.push_back(tri.l);
            votes_.push_back(q);
            votes_.push_back(tri.r);
            return node;
        }

        // (4) split at the reply, left child first
        if (node) node->split = true;
        auto [left, right] = chord_split(tri, q);
        for (const triangle<S>* child : {&left, &right}) {
            if (triangle_degenerate(*child)) {
                votes_.push_back(child->l);
                votes_.push_back(child->r);
            } else {
                auto sub = recurse(*child, depth + 1);
                if (node) node->children.push_back(std::move(sub));
            }
        }
        return node;
    }

    comb_oracle<S>& oracle_;
    metric_kind metric_;
    chord_options<S> opts_;
    chord_result<S> res_;
    std::vector<std::pair<query_slope<S>, point<S>>> transcript_;
    std::vector<point<S>> votes_;
    long depth_cap_ = 0;
};

}  // namespace detail

template <class S>
chord_result<S> run_chord(comb_oracle<S>& oracle, const S& eps, metric_kind metric,
                          const chord_options<S>& opts = {}) {
    detail::chord_run<S> run(oracle, eps, metric, opts);
    return run.run();
}

// --- verification -----------------------------------------------------------

template <class S>
struct verify_result {
    bool ok = false;
    std::string reason;  // empty when ok
    bool has_coverage = false;
    bool covered = false;
    S worst{};
    point<S> witness{};
    bool has_witness = false;
};

// Is `set_points` an eps-cover of the instance?  Checks membership, chain
// validity, and coverage, in that order.  Exact mode decides the hausdorff
// comparison on squared values.
template <class S>
verify_result<S> verify_eps_cp(const instance<S>& inst, std::vector<point<S>> set_points,
                               const S& eps, metric_kind metric) {
    verify_result<S> out;
    if (set_points.empty()) {
        out.reason = "empty point set";
        return out;
    }
    sort_points(set_points);
    set_points.erase(std::unique(set_points.begin(), set_points.end()), set_points.end());

    for (const auto& p : set_points) {
        bool found = std::binary_search(
            inst.points.begin(), inst.points.end(), p,
            [](const point<S>& a, const point<S>& b) { return point_before(a, b); });
        if (!found) {
            out.reason = "set contains a point outside the instance";
            out.witness = p;
            out.has_witness = true;
            return out;
        }
    }
    if (auto why = chain_check(set_points)) {
        out.reason = "set is not a valid chain: " + *why;
        return out;
    }

    auto cov = coverage_error(inst.points, set_points, metric);
    out.has_coverage = true;
    out.covered = cov.covered;
    out.worst = cov.worst;
    out.witness = cov.witness;
    out.has_witness = cov.has_witness;
    if (!cov.covered) {
        out.reason = "instance point not coverable by the chain";
        return out;
    }
    bool within;
    if constexpr (scalar_traits<S>::exact) {
        within = metric == metric_kind::hausdorff ? cov.worst_cmp <= S(eps * eps)
                                                  : cov.worst <= eps;
    } else {
        within = scalar_traits<S>::within(cov.worst, eps);
    }
    if (!within) {
        out.reason = "coverage error exceeds eps";
        return out;
    }
    out.ok = true;
    return out;
}

// --- trace statistics -------------------------------------------------------

template <class S>
struct trace_summary {
    long node_count = 0;
    int max_depth = 0;
    long lowest_internal = 0;  // split nodes with no split child in the trace
    std::vector<S> per_level_area_max;
};

namespace detail {

template <class S>
void walk_trace(const recursion_node<S>* node, trace_summary<S>& out) {
    if (!node) return;
    ++out.node_count;
    if (node->depth > out.max_depth) out.max_depth = node->depth;
    const auto level = static_cast<std::size_t>(node->depth);
    if (out.per_level_area_max.size() <= level) out.per_level_area_max.resize(level + 1, S{});
    S area = triangle_area(node->tri);
    if (area > out.per_level_area_max[level]) out.per_level_area_max[level] = area;
    if (node->split) {
        bool split_child = false;
        for (const auto& c : node->children)
            if (c->split) split_child = true;
        if (!split_child) ++out.lowest_internal;
    }
    for (const auto& c : node->children) walk_trace(c.get(), out);
}

}  // namespace detail

template <class S>
trace_summary<S> trace_stats(const chord_result<S>& res) {
    trace_summary<S> out;
    detail::walk_trace(res.root.get(), out);
    return out;
}

}  // namespace chordbench
