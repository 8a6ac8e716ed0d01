#pragma once

// A problem instance is a finite set of points with strictly positive
// coordinates plus the bit parameter m bounding the coordinate range.  Points
// are kept in canonical order (x ascending, ties y descending) and duplicates
// are not allowed; generators and the JSON loader both normalize to this.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "chordbench/errors.hpp"
#include "chordbench/geometry.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

template <class S>
struct instance {
    int m = 1;
    std::vector<point<S>> points;
    std::map<std::string, std::string> meta;
};

// 2^e for the scalar type; exact in both modes (division by a power of two)
template <class S>
S pow2_scalar(int e) {
    S v{1};
    for (int i = 0; i < e; ++i) v = S(v * 2);
    for (int i = 0; i > e; --i) v = S(v / 2);
    return v;
}

template <class S>
void validate_instance(const instance<S>& inst) {
    if (inst.m < 1) throw config_error("instance: m must be >= 1");
    if (inst.points.empty()) throw config_error("instance: no points");
    const S hi = pow2_scalar<S>(inst.m);
    const S lo = pow2_scalar<S>(-inst.m);
    for (const auto& p : inst.points) {
        if (!(p.x > 0 && p.y > 0))
            throw config_error("instance: coordinates must be positive");
        if (p.x < lo || p.x > hi || p.y < lo || p.y > hi)
            throw config_error("instance: coordinate outside [2^-m, 2^m]");
    }
    for (std::size_t i = 0; i + 1 < inst.points.size(); ++i) {
        if (inst.points[i] == inst.points[i + 1])
            throw config_error("instance: duplicate point");
        if (!point_before(inst.points[i], inst.points[i + 1]))
            throw config_error("instance: points not in canonical order");
    }
}

template <class S>
instance<S> make_instance(int m, std::vector<point<S>> pts,
                          std::map<std::string, std::string> meta = {}) {
    instance<S> inst;
    inst.m = m;
    sort_points(pts);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    inst.points = std::move(pts);
    inst.meta = std::move(meta);
    validate_instance(inst);
    return inst;
}

// smallest m with every coordinate inside [2^-m, 2^m] (at least 1)
template <class S>
int fit_m(const std::vector<point<S>>& pts) {
    int m = 1;
    for (const auto& p : pts) {
        for (const S* c : {&p.x, &p.y}) {
            S hi = S(2);
            int bits = 1;
            while (*c > hi && bits < 256) {
                hi = S(hi * 2);
                ++bits;
            }
            S lo = S(S(1) / 2);
            int lbits = 1;
            while (*c < lo && lbits < 256) {
                lo = S(lo / 2);
                ++lbits;
            }
            if (bits > m) m = bits;
            if (lbits > m) m = lbits;
        }
    }
    return m;
}

inline instance<double> instance_to_float(const instance<rational>& inst) {
    instance<double> out;
    out.m = inst.m;
    out.meta = inst.meta;
    out.points.reserve(inst.points.size());
    for (const auto& p : inst.points)
        out.points.push_back({scalar_traits<rational>::to_double(p.x),
                              scalar_traits<rational>::to_double(p.y)});
    sort_points(out.points);
    out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
    validate_instance(out);
    return out;
}

}  // namespace chordbench
