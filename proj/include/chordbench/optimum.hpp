#pragma once

// Offline baselines: the smallest eps-cover over the Pareto points of an
// instance (opt_exact) and the greedy farthest-reach upper bound (opt_greedy).
// Both know the full point set, which the query model denies to the search
// under test; they exist to put its call counts in perspective.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chordbench/chord.hpp"
#include "chordbench/errors.hpp"
#include "chordbench/geometry.hpp"
#include "chordbench/instance.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

enum class opt_mode_kind { exact, greedy_upper, trace_lower };

inline const char* opt_mode_name(opt_mode_kind m) {
    switch (m) {
        case opt_mode_kind::exact: return "exact";
        case opt_mode_kind::greedy_upper: return "greedy-upper";
        case opt_mode_kind::trace_lower: return "trace-lower";
    }
    return "?";
}

template <class S>
struct opt_result {
    bool feasible = false;
    long size = 0;
    chain<S> witness;
    opt_mode_kind mode = opt_mode_kind::exact;
    metric_kind metric = metric_kind::ratio;
    S epsilon{};
};

namespace detail {

class bitmask {
  public:
    bitmask() = default;
    explicit bitmask(std::size_t bits) : w_((bits + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    bool any() const {
        for (auto x : w_)
            if (x) return true;
        return false;
    }
    bool subset_of(const bitmask& o) const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }
    void remove(const bitmask& covered) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~covered.w_[i];
    }
    template <class F>
    bool all_of(F&& f) const {  // f over set bit indices; stops on first false
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t m = w_[i];
            while (m) {
                const unsigned b = static_cast<unsigned>(std::countr_zero(m));
                if (!f(i * 64 + b)) return false;
                m &= m - 1;
            }
        }
        return true;
    }

  private:
    std::vector<std::uint64_t> w_;
};

// Coverage of a single target by one chain element, phrased so that it agrees
// with coverage_error on whole chains: a horizontal-metric edge covers only
// targets inside its vertical span, and a level edge acts through its left
// endpoint, which is where the chain crossing lands.
template <class S>
bool pair_covers(const point<S>& p, const point<S>& a, const point<S>& b, metric_kind metric,
                 const S& eps) {
    if (metric == metric_kind::horizontal) {
        if (p.y > a.y || p.y < b.y) return false;
        if (a.y == b.y) {
            const S d = a.x > p.x ? S(a.x - p.x) : S(0);
            return scalar_traits<S>::within(d, eps);
        }
        return scalar_traits<S>::within(segment_horizontal_distance(p, a, b), eps);
    }
    return segment_within(p, a, b, metric, eps);
}

template <class S>
bool vertex_covers(const point<S>& p, const point<S>& v, metric_kind metric, const S& eps) {
    switch (metric) {
        case metric_kind::ratio:
            return scalar_traits<S>::within(ratio_distance(p, v), eps);
        case metric_kind::horizontal: {
            if (p.y != v.y) return false;
            const S d = v.x > p.x ? S(v.x - p.x) : S(0);
            return scalar_traits<S>::within(d, eps);
        }
        case metric_kind::hausdorff: {
            const S dx = S(v.x - p.x), dy = S(v.y - p.y);
            const S d2 = S(dx * dx + dy * dy);
            if constexpr (scalar_traits<S>::exact) return d2 <= S(eps * eps);
            return scalar_traits<S>::within(report_sqrt(d2), eps);
        }
    }
    throw domain_error("vertex_covers: bad metric");
}

// Reachability filter: once the search frontier sits at v, every later chain
// element lies in the quadrant right of and below v, which bounds how well any
// continuation can still serve p.  False means p is irrecoverably missed.
template <class S>
bool future_coverable(const point<S>& p, const point<S>& v, metric_kind metric, const S& eps) {
    switch (metric) {
        case metric_kind::ratio: {
            if (v.x <= p.x) return true;
            return scalar_traits<S>::within(S(v.x / p.x - 1), eps);
        }
        case metric_kind::horizontal: {
            if (p.y > v.y) return false;
            if (v.x <= p.x) return true;
            return scalar_traits<S>::within(S(v.x - p.x), eps);
        }
        case metric_kind::hausdorff: {
            const S dx = v.x > p.x ? S(v.x - p.x) : S(0);
            const S dy = p.y > v.y ? S(p.y - v.y) : S(0);
            const S d2 = S(dx * dx + dy * dy);
            if constexpr (scalar_traits<S>::exact) return d2 <= S(eps * eps);
            return scalar_traits<S>::within(report_sqrt(d2), eps);
        }
    }
    throw domain_error("future_coverable: bad metric");
}

}  // namespace detail

// Minimum-cardinality subset of the Pareto points whose envelope eps-covers
// the whole instance.  Breadth-first over cardinality: a state is (previous
// vertex, last vertex, still-uncovered targets); expanding in index order
// with strict-turn checks enumerates exactly the convex subchains, so the
// first completed layer is the optimum.  Reachability pruning plus subset
// dominance per (prev, last) keeps the layers small.  Under the ratio metric
// covering the Pareto points is enough: a dominated point's ratio distance to
// any chain is at most its dominator's, so coverage transfers.  That transfer
// fails for the other metrics — horizontally a point above the top Pareto
// vertex has no crossing at all, and euclidean distance to a dominator is
// unbounded — so there every instance point is a target.
template <class S>
opt_result<S> opt_exact(const instance<S>& inst, const S& eps, metric_kind metric, long cap = 24) {
    if (eps < 0) throw config_error("opt_exact: eps must be >= 0");
    opt_result<S> out;
    out.mode = opt_mode_kind::exact;
    out.metric = metric;
    out.epsilon = eps;

    const std::vector<point<S>> cand = staircase_filter(inst.points);
    const int K = static_cast<int>(cand.size());
    if (K > cap)
        throw config_error("opt_exact: " + std::to_string(K) + " Pareto points exceed the cap of " +
                           std::to_string(cap) + "; use opt_greedy");
    const std::vector<point<S>>& targets = metric == metric_kind::ratio ? cand : inst.points;
    const std::size_t T = targets.size();

    detail::bitmask all(T);
    for (std::size_t i = 0; i < T; ++i) all.set(i);

    std::vector<std::optional<detail::bitmask>> vmask(static_cast<std::size_t>(K));
    std::vector<std::optional<detail::bitmask>> pmask(static_cast<std::size_t>(K) * K);
    auto vertex_mask = [&](int v) -> const detail::bitmask& {
        auto& slot = vmask[static_cast<std::size_t>(v)];
        if (!slot) {
            detail::bitmask m(T);
            for (std::size_t i = 0; i < T; ++i)
                if (detail::vertex_covers(targets[i], cand[v], metric, eps)) m.set(i);
            slot = std::move(m);
        }
        return *slot;
    };
    auto pair_mask = [&](int a, int b) -> const detail::bitmask& {
        auto& slot = pmask[static_cast<std::size_t>(a) * K + b];
        if (!slot) {
            detail::bitmask m(T);
            for (std::size_t i = 0; i < T; ++i)
                if (detail::pair_covers(targets[i], cand[a], cand[b], metric, eps)) m.set(i);
            slot = std::move(m);
        }
        return *slot;
    };
    auto alive = [&](const detail::bitmask& u, int end) {
        return u.all_of([&](std::size_t t) {
            return detail::future_coverable(targets[t], cand[end], metric, eps);
        });
    };

    std::vector<std::vector<detail::bitmask>> seen(static_cast<std::size_t>(K + 1) * K);
    auto admit = [&](int prev, int vertex, const detail::bitmask& u) {
        auto& lst = seen[static_cast<std::size_t>(prev + 1) * K + vertex];
        for (const auto& s : lst)
            if (s.subset_of(u)) return false;
        lst.erase(std::remove_if(lst.begin(), lst.end(),
                                 [&](const detail::bitmask& s) { return u.subset_of(s); }),
                  lst.end());
        lst.push_back(u);
        return true;
    };

    struct search_node {
        int parent;  // index into the previous layer
        int prev;    // vertex before `vertex`, -1 for singletons
        int vertex;
        detail::bitmask left;
    };
    std::vector<std::vector<search_node>> layers;
    int done_layer = -1, done_node = -1;

    layers.emplace_back();
    for (int v = 0; v < K && done_layer < 0; ++v) {
        detail::bitmask u = all;
        u.remove(vertex_mask(v));
        if (!alive(u, v)) continue;
        if (!admit(-1, v, u)) continue;
        layers[0].push_back({-1, -1, v, u});
        if (!u.any()) {
            done_layer = 0;
            done_node = static_cast<int>(layers[0].size()) - 1;
        }
    }
    for (int t = 1; t < K && done_layer < 0; ++t) {
        layers.emplace_back();
        auto& cur = layers[static_cast<std::size_t>(t)];
        const auto& prior = layers[static_cast<std::size_t>(t) - 1];
        for (std::size_t pi = 0; pi < prior.size() && done_layer < 0; ++pi) {
            const search_node& s = prior[pi];
            for (int j = s.vertex + 1; j < K; ++j) {
                if (s.prev >= 0 && !(cross(cand[s.prev], cand[s.vertex], cand[j]) > 0)) continue;
                detail::bitmask u = s.left;
                u.remove(pair_mask(s.vertex, j));
                if (!alive(u, j)) continue;
                if (!admit(s.vertex, j, u)) continue;
                cur.push_back({static_cast<int>(pi), s.vertex, j, u});
                if (!u.any()) {
                    done_layer = t;
                    done_node = static_cast<int>(cur.size()) - 1;
                    break;
                }
            }
        }
        if (cur.empty()) break;  // no viable prefix of this size, so no larger chain either
    }

    if (done_layer < 0) return out;  // infeasible at every cardinality
    std::vector<point<S>> w;
    for (int L = done_layer, n = done_node; n >= 0; --L) {
        const search_node& nd = layers[static_cast<std::size_t>(L)][static_cast<std::size_t>(n)];
        w.push_back(cand[nd.vertex]);
        n = nd.parent;
    }
    std::reverse(w.begin(), w.end());
    out.feasible = true;
    out.witness = std::move(w);
    out.size = static_cast<long>(out.witness.size());
    return out;
}

// Farthest-reach walk along the envelope of the Pareto points: from the
// current anchor, binary-search the farthest vertex such that every skipped
// envelope vertex stays within eps of the anchor-candidate segment (valid
// because shortening a jump only moves the segment closer to the skipped
// arc).  The result is verified against the full instance before it is
// declared an upper bound; if the local rule missed something, fall back to
// the whole envelope.
template <class S>
opt_result<S> opt_greedy(const instance<S>& inst, const S& eps, metric_kind metric) {
    if (eps < 0) throw config_error("opt_greedy: eps must be >= 0");
    opt_result<S> out;
    out.mode = opt_mode_kind::greedy_upper;
    out.metric = metric;
    out.epsilon = eps;

    const chain<S> env = convex_envelope(inst.points);
    chain<S> sel;
    sel.push_back(env.front());
    std::size_t anchor = 0;
    while (anchor + 1 < env.size()) {
        auto jump_ok = [&](std::size_t j) {
            for (std::size_t i = anchor + 1; i < j; ++i)
                if (!detail::pair_covers(env[i], env[anchor], env[j], metric, eps)) return false;
            return true;
        };
        std::size_t lo = anchor + 1, hi = env.size() - 1;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo + 1) / 2;
            if (jump_ok(mid)) lo = mid;
            else hi = mid - 1;
        }
        sel.push_back(env[lo]);
        anchor = lo;
    }

    auto ver = verify_eps_cp(inst, sel, eps, metric);
    if (!ver.ok && sel.size() != env.size()) {
        sel = env;
        ver = verify_eps_cp(inst, sel, eps, metric);
    }
    if (!ver.ok) return out;
    out.feasible = true;
    out.witness = std::move(sel);
    out.size = static_cast<long>(out.witness.size());
    return out;
}

template <class S>
S performance_ratio(const chord_result<S>& chd, const opt_result<S>& opt) {
    if (!opt.feasible || opt.size <= 0)
        throw domain_error("performance_ratio: optimum has no witness");
    return S(scalar_traits<S>::from_long(chd.comb_calls) /
             scalar_traits<S>::from_long(opt.size));
}

}  // namespace chordbench
