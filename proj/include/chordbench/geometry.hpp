#pragma once

// Planar primitives for bi-objective lower envelopes: points, convex chains,
// the three coverage metrics, and the triangle bookkeeping used by the chord
// recursion.  Everything is exact in rational mode.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chordbench/errors.hpp"
#include "chordbench/kernels.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

template <class S>
struct point {
    S x{};
    S y{};

    friend bool operator==(const point& a, const point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const point& a, const point& b) { return !(a == b); }
};

template <class S>
using chain = std::vector<point<S>>;

enum class metric_kind { ratio, horizontal, hausdorff };

inline const char* metric_name(metric_kind k) {
    switch (k) {
        case metric_kind::ratio: return "ratio";
        case metric_kind::horizontal: return "horizontal";
        case metric_kind::hausdorff: return "hausdorff";
    }
    return "?";
}

inline std::optional<metric_kind> metric_from_name(const std::string& name) {
    if (name == "ratio") return metric_kind::ratio;
    if (name == "horizontal") return metric_kind::horizontal;
    if (name == "hausdorff") return metric_kind::hausdorff;
    return std::nullopt;
}

// canonical order: x ascending, ties broken by y descending
template <class S>
bool point_before(const point<S>& a, const point<S>& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y > b.y;
}

template <class S>
void sort_points(std::vector<point<S>>& pts) {
    std::sort(pts.begin(), pts.end(), [](const point<S>& a, const point<S>& b) {
        return point_before(a, b);
    });
}

template <class S>
S cross(const point<S>& o, const point<S>& a, const point<S>& b) {
    return S((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x));
}

// --- metrics ----------------------------------------------------------------

// Multiplicative distance: how much p has to be inflated so that q starts to
// dominate... more precisely, the least e >= 0 with x(q) <= (1+e) x(p) and
// y(q) <= (1+e) y(p).  Requires strictly positive coordinates.
template <class S>
S ratio_distance(const point<S>& p, const point<S>& q) {
    if (!(p.x > 0 && p.y > 0 && q.x > 0 && q.y > 0))
        throw domain_error("ratio_distance: coordinates must be positive");
    S rx = S(q.x / p.x - 1);
    S ry = S(q.y / p.y - 1);
    S worst = rx > ry ? rx : ry;
    return worst > 0 ? worst : S(0);
}

// inf over the segment [l, r] of ratio_distance(p, .).  The objective is the
// max of two linear-in-t functions and 0, hence convex piecewise linear; the
// minimum over [0, 1] is attained at an endpoint or at one of the crossing
// parameters (A = B, A = 0, B = 0), so five candidates suffice.
template <class S>
S segment_ratio_distance(const point<S>& p, const point<S>& l, const point<S>& r) {
    if (!(p.x > 0 && p.y > 0 && l.x > 0 && l.y > 0 && r.x > 0 && r.y > 0))
        throw domain_error("segment_ratio_distance: coordinates must be positive");
    const S a0 = S(l.x / p.x - 1), sa = S((r.x - l.x) / p.x);
    const S b0 = S(l.y / p.y - 1), sb = S((r.y - l.y) / p.y);
    auto eval = [&](const S& t) {
        S a = S(a0 + sa * t);
        S b = S(b0 + sb * t);
        S m = a > b ? a : b;
        return m > 0 ? m : S(0);
    };
    S best = eval(S(0));
    auto consider = [&](const S& t) {
        if (t <= 0 || t >= 1) return;
        S v = eval(t);
        if (v < best) best = v;
    };
    {
        S v = eval(S(1));
        if (v < best) best = v;
    }
    if (sa != sb) consider(S((b0 - a0) / (sa - sb)));
    if (sa != 0) consider(S(-a0 / sa));
    if (sb != 0) consider(S(-b0 / sb));
    return best;
}

// x-coordinate of the *line* through l and r at height y.  Horizontal lines
// have no crossing; that case is the caller's problem (domain error here).
template <class S>
S segment_crossing_x(const point<S>& l, const point<S>& r, const S& y) {
    if (l.y == r.y) throw domain_error("segment_crossing_x: horizontal segment");
    return S(l.x + (y - l.y) * (r.x - l.x) / (r.y - l.y));
}

// One-sided horizontal distance from p to the line through l, r: how far the
// line sits to the right of p at p's height (0 when it is at or left of p).
template <class S>
S segment_horizontal_distance(const point<S>& p, const point<S>& l, const point<S>& r) {
    S cx = segment_crossing_x(l, r, p.y);
    S d = S(cx - p.x);
    return d > 0 ? d : S(0);
}

// squared Euclidean distance from p to the segment [l, r]
template <class S>
S segment_distance_sq(const point<S>& p, const point<S>& l, const point<S>& r) {
    const S dx = S(r.x - l.x), dy = S(r.y - l.y);
    const S len_sq = S(dx * dx + dy * dy);
    S px = S(p.x - l.x), py = S(p.y - l.y);
    if (len_sq > 0) {
        S t = S((px * dx + py * dy) / len_sq);
        if (t < 0) t = S(0);
        if (t > 1) t = S(1);
        px = S(px - t * dx);
        py = S(py - t * dy);
    }
    return S(px * px + py * py);
}

template <class S>
S report_sqrt(const S& v) {
    return scalar_traits<S>::sqrt_down(v);
}

template <class S>
S metric_to_segment(const point<S>& p, const point<S>& l, const point<S>& r, metric_kind metric) {
    switch (metric) {
        case metric_kind::ratio: return segment_ratio_distance(p, l, r);
        case metric_kind::horizontal: return segment_horizontal_distance(p, l, r);
        case metric_kind::hausdorff: return report_sqrt(segment_distance_sq(p, l, r));
    }
    throw domain_error("metric_to_segment: bad metric");
}

// Decision form of the above.  Kept separate so exact mode can compare the
// hausdorff metric on squared values instead of a rounded square root.
template <class S>
bool segment_within(const point<S>& p, const point<S>& l, const point<S>& r, metric_kind metric,
                    const S& eps) {
    switch (metric) {
        case metric_kind::ratio:
            return scalar_traits<S>::within(segment_ratio_distance(p, l, r), eps);
        case metric_kind::horizontal:
            return scalar_traits<S>::within(segment_horizontal_distance(p, l, r), eps);
        case metric_kind::hausdorff: {
            if (eps < 0) return false;
            if constexpr (scalar_traits<S>::exact) {
                return segment_distance_sq(p, l, r) <= S(eps * eps);
            } else {
                return scalar_traits<S>::within(report_sqrt(segment_distance_sq(p, l, r)), eps);
            }
        }
    }
    throw domain_error("segment_within: bad metric");
}

// --- chains -----------------------------------------------------------------

// A valid chain is a convex lower-left staircase: vertices in canonical order,
// no duplicates, every edge pointing right/down, and consecutive edges turning
// strictly (which also forces a vertical edge to be first and a horizontal one
// to be last).
template <class S>
std::optional<std::string> chain_check(const chain<S>& ch) {
    if (ch.empty()) return "chain is empty";
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        const auto& a = ch[i];
        const auto& b = ch[i + 1];
        S dx = S(b.x - a.x), dy = S(b.y - a.y);
        if (dx == 0 && dy == 0) return "duplicate vertex";
        if (dx < 0 || dy > 0) return "vertices out of staircase order";
    }
    for (std::size_t i = 0; i + 2 < ch.size(); ++i) {
        // cross > 0 is a strict convex turn for this orientation; it also
        // forces vertical edges to the front and horizontal ones to the back
        if (cross(ch[i], ch[i + 1], ch[i + 2]) <= 0)
            return "edges do not turn strictly (collinear or reflex)";
    }
    return std::nullopt;
}

template <class S>
bool chain_ok(const chain<S>& ch) {
    return !chain_check(ch).has_value();
}

// Drop every point that is strictly dominated (some other point strictly
// smaller in both coordinates).  Input must be in canonical order; ties in x
// survive, which is what keeps boundary points like the top of a vertical run
// eligible.
template <class S>
std::vector<point<S>> staircase_filter(const std::vector<point<S>>& sorted) {
    std::vector<point<S>> out;
    out.reserve(sorted.size());
    std::optional<S> min_y_before;  // min y over strictly smaller x
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].x == sorted[i].x) ++j;
        for (std::size_t t = i; t < j; ++t)
            if (!min_y_before || !(sorted[t].y > *min_y_before)) out.push_back(sorted[t]);
        const S& group_min = sorted[j - 1].y;  // y descending inside the group
        if (!min_y_before || group_min < *min_y_before) min_y_before = group_min;
        i = j;
    }
    return out;
}

// Convex lower-left envelope of a canonical-order point set: staircase filter
// followed by a monotone scan that removes reflex and collinear interior
// vertices.  The result always satisfies chain_check.
template <class S>
chain<S> convex_envelope(const std::vector<point<S>>& sorted) {
    std::vector<point<S>> stair = staircase_filter(sorted);
    chain<S> out;
    for (const auto& p : stair) {
        if (!out.empty() && out.back() == p) continue;
        while (out.size() >= 2 && cross(out[out.size() - 2], out.back(), p) <= 0) out.pop_back();
        out.push_back(p);
    }
    return out;
}

// x where the chain crosses height y, taking the leftmost chain point at that
// height; nullopt when y is outside the chain's vertical span.
template <class S>
std::optional<S> chain_crossing_x(const chain<S>& ch, const S& y) {
    if (ch.empty()) return std::nullopt;
    if (ch.size() == 1) {
        if (y == ch[0].y) return ch[0].x;
        return std::nullopt;
    }
    if (y > ch.front().y || y < ch.back().y) return std::nullopt;
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        const auto& a = ch[i];
        const auto& b = ch[i + 1];
        if (a.y == b.y) {
            if (y == a.y) return a.x;
            continue;
        }
        if (y <= a.y && y >= b.y) return segment_crossing_x(a, b, y);
    }
    return std::nullopt;  // unreachable for a valid chain
}

// --- coverage ---------------------------------------------------------------

template <class S>
struct coverage_result {
    bool covered = true;
    S worst{};           // meaningful only when covered
    S worst_cmp{};       // same, but squared for hausdorff (exact comparisons)
    point<S> witness{};  // first point attaining worst, or first uncovered one
    bool has_witness = false;
};

namespace detail {

// Per-point coverage value against the chain; nullopt = not coverable at all
// (horizontal metric outside the chain's vertical span).  For hausdorff the
// returned value is the *squared* distance so exact mode never needs roots
// while comparing.
template <class S>
std::optional<S> cover_value(const point<S>& p, const chain<S>& ch, metric_kind metric) {
    switch (metric) {
        case metric_kind::ratio: {
            if (ch.size() == 1) return segment_ratio_distance(p, ch[0], ch[0]);
            std::optional<S> best;
            for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
                S v = segment_ratio_distance(p, ch[i], ch[i + 1]);
                if (!best || v < *best) best = v;
                if (*best == 0) break;
            }
            return best;
        }
        case metric_kind::horizontal: {
            auto cx = chain_crossing_x(ch, p.y);
            if (!cx) return std::nullopt;
            S d = S(*cx - p.x);
            return d > 0 ? d : S(0);
        }
        case metric_kind::hausdorff: {
            if (ch.size() == 1) return segment_distance_sq(p, ch[0], ch[0]);
            std::optional<S> best;
            for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
                S v = segment_distance_sq(p, ch[i], ch[i + 1]);
                if (!best || v < *best) best = v;
                if (*best == 0) break;
            }
            return best;
        }
    }
    throw domain_error("cover_value: bad metric");
}

}  // namespace detail

// Worst coverage value of any instance point against the chain.  The witness
// is the first point (in canonical instance order) attaining the maximum; an
// uncoverable point short-circuits with covered = false.
template <class S>
coverage_result<S> coverage_error(const std::vector<point<S>>& pts, const chain<S>& ch,
                                  metric_kind metric) {
    if (ch.empty()) throw domain_error("coverage_error: empty chain");
    coverage_result<S> res;
    if (pts.empty()) return res;

    std::vector<std::optional<S>> vals(pts.size());
    kernels::for_each_index(pts.size(), [&](std::size_t i) {
        vals[i] = detail::cover_value(pts[i], ch, metric);
    });

    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!vals[i]) {
            res.covered = false;
            res.witness = pts[i];
            res.has_witness = true;
            res.worst = S{};
            return res;
        }
    }
    std::size_t w = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (*vals[i] > *vals[w]) w = i;
    res.covered = true;
    res.worst_cmp = *vals[w];
    res.worst = metric == metric_kind::hausdorff ? report_sqrt(*vals[w]) : *vals[w];
    res.witness = pts[w];
    res.has_witness = true;
    return res;
}

// --- triangles --------------------------------------------------------------

template <class S>
struct triangle {
    point<S> l;  // top-left corner (smaller x, larger y)
    point<S> r;  // bottom-right corner
    point<S> s;  // inner corner under the chord
};

template <class S>
S triangle_area(const point<S>& a, const point<S>& b, const point<S>& c) {
    S cr = cross(a, b, c);
    if (cr < 0) cr = S(-cr);
    return S(cr / 2);
}

template <class S>
S triangle_area(const triangle<S>& t) {
    return triangle_area(t.l, t.r, t.s);
}

namespace detail {

// Intersection of the line through q with direction d and the segment [u, v];
// the parameter along [u, v] is clamped, so a (nearly) parallel configuration
// degrades to an endpoint instead of blowing up.
template <class S>
point<S> line_segment_meet(const point<S>& q, const S& dx, const S& dy, const point<S>& u,
                           const point<S>& v) {
    const S ex = S(v.x - u.x), ey = S(v.y - u.y);
    const S denom = S(ex * dy - ey * dx);
    if (denom == 0) return q;
    S w = S(((q.x - u.x) * dy - (q.y - u.y) * dx) / denom);
    if (w < 0) w = S(0);
    if (w > 1) w = S(1);
    return point<S>{S(u.x + w * ex), S(u.y + w * ey)};
}

}  // namespace detail

// Split a triangle at an answer point q: the chord through q parallel to the
// l-r segment cuts the legs l-s and s-r, producing the two child triangles of
// the recursion.
template <class S>
std::pair<triangle<S>, triangle<S>> chord_split(const triangle<S>& t, const point<S>& q) {
    const S dx = S(t.r.x - t.l.x), dy = S(t.r.y - t.l.y);
    point<S> sl = detail::line_segment_meet(q, dx, dy, t.l, t.s);
    point<S> sr = detail::line_segment_meet(q, dx, dy, t.s, t.r);
    return {triangle<S>{t.l, q, sl}, triangle<S>{q, t.r, sr}};
}

// Relative height of the chord inside the parent triangle, measured along the
// l-s leg (t = 0 at s, t = 1 at l); falls back to the x-ratio when the leg is
// horizontal.  The children of a split satisfy area(left) + area(right) =
// t (1 - t) area(parent) exactly.
template <class S>
S split_fraction(const triangle<S>& parent, const triangle<S>& left_child) {
    const point<S>& sl = left_child.s;
    if (parent.l.y != parent.s.y) return S((sl.y - parent.s.y) / (parent.l.y - parent.s.y));
    if (parent.l.x != parent.s.x) return S((sl.x - parent.s.x) / (parent.l.x - parent.s.x));
    return S(0);
}

}  // namespace chordbench
