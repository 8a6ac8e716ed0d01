#pragma once

// Instance generators: the two adversarial families built exactly in rational
// arithmetic (the forced-path staircase I_G and its lower-bound scaling I_LB),
// and the stochastic families sampled in float mode (Poisson process in a
// triangle, the average-case lower-bound triangle, and gamma-balanced draws).

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chordbench/errors.hpp"
#include "chordbench/geometry.hpp"
#include "chordbench/instance.hpp"
#include "chordbench/rng.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

// --- forced-path staircase --------------------------------------------------

struct ig_params {
    rational H{1};
    rational L{1};
    long k = 2;
    long j = 1;
    bool perturb = false;  // shrink each construction slope by (1 - 2^-64)
};

namespace detail {

inline int fit_m_pow2(const rational& v) {
    // smallest m >= 1 with v <= 2^m
    int m = 1;
    rational bound{2};
    while (bound < v && m < 256) {
        bound = rational(bound * 2);
        ++m;
    }
    return m;
}

}  // namespace detail

// The staircase a = q_0, q_1, ..., q_{j+1}, b: q_1 sits directly below a at
// height 1 + H/k, and each later q_i lies on the line through q_{i-1} parallel
// to the chord q_{i-2}b, at height 1 + (y(q_{i-1}) - 1)/(k+i-1).  Every search
// step along the chain discovers exactly one new staircase point, which is
// what makes the family adversarial.
inline instance<rational> gen_ig(const ig_params& p) {
    if (!(p.H > 0) || !(p.L > 0)) throw config_error("gen_ig: H and L must be positive");
    if (p.k < 2) throw config_error("gen_ig: k must be >= 2");
    if (p.j < 1 || p.j > p.k - 1) throw config_error("gen_ig: need 1 <= j <= k-1");

    const point<rational> a{rational(1), rational(1 + p.H)};
    const point<rational> b{rational(1 + p.L), rational(1)};
    const rational shrink = rational(1) - rational(rational(1) / (mpz_class(1) << 64));

    std::vector<point<rational>> pts;
    pts.reserve(static_cast<std::size_t>(p.j) + 3);
    pts.push_back(a);
    point<rational> prev2 = a;  // q_{i-2}
    point<rational> prev{rational(1), rational(1 + p.H / p.k)};
    pts.push_back(prev);
    for (long i = 2; i <= p.j + 1; ++i) {
        rational lam = rational((prev2.y - b.y) / (b.x - prev2.x));
        if (p.perturb) lam = rational(lam * shrink);
        const rational yi = rational(1 + (prev.y - 1) / (p.k + i - 1));
        const rational xi = rational(prev.x + (prev.y - yi) / lam);
        prev2 = prev;
        prev = {xi, yi};
        pts.push_back(prev);
    }
    pts.push_back(b);

    const rational eps_l = rational(p.L * (p.k - 1) / (p.k + p.j - 1));
    const rational eps_prime_l = rational(rational(p.j) / p.k * eps_l);
    const rational top = p.H > p.L ? rational(1 + p.H) : rational(1 + p.L);

    std::map<std::string, std::string> meta{
        {"family", "ig"},
        {"H", format_rational(p.H)},
        {"L", format_rational(p.L)},
        {"k", std::to_string(p.k)},
        {"j", std::to_string(p.j)},
        {"eps_L", format_rational(eps_l)},
        {"eps_prime_L", format_rational(eps_prime_l)},
        {"perturb", p.perturb ? "1" : "0"},
    };
    return make_instance<rational>(detail::fit_m_pow2(top), std::move(pts), std::move(meta));
}

// --- worst-case lower-bound scaling ------------------------------------------

struct lb_params {
    rational eps;
    long m = 4;
    rational mu{1};
    double c0 = 1.0;
    bool perturb = false;
};

// I_LB(eps, m, mu): H* = 2^m - 1, L* = (mu+1)eps, j* ~ c0/mu * ln(H*/eps) /
// ln ln(H*/eps) clamped to >= 1, k* = ceil(mu j*) + 1, then the staircase
// above.  j* is evaluated in doubles; only the final staircase is exact.
inline instance<rational> gen_lb(const lb_params& p) {
    if (p.m < 4) throw config_error("gen_lb: m must be >= 4");
    if (!(p.eps > 0) || !(p.eps < rational(1, 64)))
        throw config_error("gen_lb: eps must be in (0, 2^-6)");
    if (p.mu < 1) throw config_error("gen_lb: mu must be >= 1");
    if (!(p.c0 > 0)) throw config_error("gen_lb: c0 must be positive");

    const rational h_star = rational(rational(mpz_class(mpz_class(1) << p.m)) - 1);
    const rational l_star = rational((p.mu + 1) * p.eps);
    const double lnv = std::log(scalar_traits<rational>::to_double(rational(h_star / p.eps)));
    if (!(lnv > 1))
        throw config_error("gen_lb: eps too large relative to 2^m (log log underflow)");
    const double jraw =
        p.c0 * (1.0 / scalar_traits<rational>::to_double(p.mu)) * lnv / std::log(lnv);
    long j_star = static_cast<long>(std::floor(jraw));
    if (j_star < 1) j_star = 1;

    mpz_class k_num;
    {
        rational kj = rational(p.mu * j_star);
        kj.canonicalize();
        mpz_cdiv_q(k_num.get_mpz_t(), kj.get_num().get_mpz_t(), kj.get_den().get_mpz_t());
    }
    long k_star = k_num.get_si() + 1;
    bool adjusted = false;
    while (j_star > k_star - 1) {  // unreachable for mu >= 1; kept as a guard
        ++k_star;
        adjusted = true;
    }

    instance<rational> inst = gen_ig({h_star, l_star, k_star, j_star, p.perturb});
    inst.meta["family"] = "lb";
    inst.meta["eps"] = format_rational(p.eps);
    inst.meta["mu"] = format_rational(p.mu);
    inst.meta["c0"] = format_double(p.c0);
    inst.meta["H_star"] = format_rational(h_star);
    inst.meta["L_star"] = format_rational(l_star);
    inst.meta["j_star"] = std::to_string(j_star);
    inst.meta["k_star"] = std::to_string(k_star);
    inst.meta["eps_L_star"] = inst.meta["eps_L"];
    inst.meta["eps_prime_L_star"] = inst.meta["eps_prime_L"];
    if (adjusted) inst.meta["k_star_adjusted"] = "1";
    return inst;
}

// --- stochastic families ------------------------------------------------------

namespace detail {

inline point<double> triangle_sample(rng_stream& g, const point<double>& a,
                                     const point<double>& b, const point<double>& c) {
    const double s = std::sqrt(g.uniform01());
    const double r = g.uniform01();
    return {(1 - s) * a.x + s * (1 - r) * b.x + s * r * c.x,
            (1 - s) * a.y + s * (1 - r) * b.y + s * r * c.y};
}

inline double triangle_area_f(const point<double>& a, const point<double>& b,
                              const point<double>& c) {
    return std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)) / 2;
}

inline void check_triangle(const point<double>& a, const point<double>& b,
                           const point<double>& c, const char* who) {
    for (const auto* p : {&a, &b, &c})
        if (!(p->x > 0 && p->y > 0))
            throw config_error(std::string(who) + ": triangle corners must be positive");
    if (!(triangle_area_f(a, b, c) > 0))
        throw config_error(std::string(who) + ": triangle is degenerate");
}

}  // namespace detail

struct ppp_params {
    point<double> a{}, b{}, c{};
    double nu = 1;  // intensity, points per unit area
    std::uint64_t seed = 0;
};

constexpr double ppp_expected_cap = 1e7;

// Homogeneous Poisson process on a triangle: N ~ Poisson(nu * area), then N
// independent uniform draws (conditional uniformity).
inline instance<double> gen_ppp(const ppp_params& p) {
    detail::check_triangle(p.a, p.b, p.c, "gen_ppp");
    if (!(p.nu > 0)) throw config_error("gen_ppp: intensity must be positive");
    const double lam = p.nu * detail::triangle_area_f(p.a, p.b, p.c);
    if (lam > ppp_expected_cap)
        throw config_error("gen_ppp: expected count " + format_double(lam) +
                           " exceeds the cap of 1e7");
    rng_stream g(p.seed);
    const long n = g.poisson(lam);
    std::vector<point<double>> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) pts.push_back(detail::triangle_sample(g, p.a, p.b, p.c));

    std::map<std::string, std::string> meta{
        {"family", "ppp"},
        {"nu", format_double(p.nu)},
        {"seed", std::to_string(p.seed)},
        {"ax", format_double(p.a.x)}, {"ay", format_double(p.a.y)},
        {"bx", format_double(p.b.x)}, {"by", format_double(p.b.y)},
        {"cx", format_double(p.c.x)}, {"cy", format_double(p.c.y)},
    };
    const int mm = fit_m(pts);
    return make_instance<double>(mm, std::move(pts), std::move(meta));
}

// The average-case lower-bound family: a thin triangle with corners a=(1,2),
// b=(1+2eps,1), c=(1,1), intensity 1/eps^2 (expected interior count 1/eps),
// with the two extreme corners appended so the search preamble always has
// answers.
inline instance<double> gen_avg_lb(double eps, std::uint64_t seed) {
    if (!(eps > 0) || !(eps < 0.25)) throw config_error("gen_avg_lb: need 0 < eps < 1/4");
    const point<double> a{1, 2}, b{1 + 2 * eps, 1}, c{1, 1};
    const double nu = 1 / (eps * eps);
    const double lam = nu * detail::triangle_area_f(a, b, c);
    if (lam > ppp_expected_cap)
        throw config_error("gen_avg_lb: expected count exceeds the cap of 1e7");
    rng_stream g(seed);
    const long n = g.poisson(lam);
    std::vector<point<double>> pts;
    pts.reserve(static_cast<std::size_t>(n) + 2);
    for (long i = 0; i < n; ++i) pts.push_back(detail::triangle_sample(g, a, b, c));
    pts.push_back(a);
    pts.push_back(b);

    std::map<std::string, std::string> meta{
        {"family", "avg-lb"},
        {"eps", format_double(eps)},
        {"nu", format_double(nu)},
        {"seed", std::to_string(seed)},
    };
    const int mm = fit_m(pts);
    return make_instance<double>(mm, std::move(pts), std::move(meta));
}

// --- gamma-balanced sampling --------------------------------------------------

enum class tilt_kind { uniform, linear_x };

struct balanced_params {
    point<double> a{}, b{}, c{};
    long n = 1;
    double gamma = 0;  // in [0, 1)
    tilt_kind tilt = tilt_kind::uniform;
    double r0 = 1;  // density-to-uniform ratio at the left edge (linear tilt)
    double r1 = 1;  // ... and at the right edge
    std::uint64_t seed = 0;
};

// n draws from a density whose pointwise ratio to uniform stays inside
// [1-gamma, 1/(1-gamma)].  The linear tilt w(x) = lerp(r0, r1) is normalized
// by its uniform mean Z = w(centroid x) — exact because w is linear — and the
// ratio bounds are checked against Z before any sampling happens.  Rejection
// against the uniform envelope keeps draws exact.
inline instance<double> gen_balanced(const balanced_params& p) {
    detail::check_triangle(p.a, p.b, p.c, "gen_balanced");
    if (p.n < 1) throw config_error("gen_balanced: n must be >= 1");
    if (!(p.gamma >= 0 && p.gamma < 1)) throw config_error("gen_balanced: gamma must be in [0,1)");

    rng_stream g(p.seed);
    std::vector<point<double>> pts;
    pts.reserve(static_cast<std::size_t>(p.n));

    if (p.tilt == tilt_kind::uniform) {
        for (long i = 0; i < p.n; ++i) pts.push_back(detail::triangle_sample(g, p.a, p.b, p.c));
    } else {
        const double xmin = std::min({p.a.x, p.b.x, p.c.x});
        const double xmax = std::max({p.a.x, p.b.x, p.c.x});
        if (!(xmax > xmin)) throw config_error("gen_balanced: linear tilt needs x extent");
        if (!(p.r0 > 0 && p.r1 > 0)) throw config_error("gen_balanced: tilt ratios must be positive");
        const double xbar = (p.a.x + p.b.x + p.c.x) / 3;
        const double z = p.r0 + (p.r1 - p.r0) * (xbar - xmin) / (xmax - xmin);
        const double lo = std::min(p.r0, p.r1) / z;
        const double hi = std::max(p.r0, p.r1) / z;
        if (!scalar_traits<double>::within(1 - p.gamma, lo) ||
            !scalar_traits<double>::within(hi, 1 / (1 - p.gamma)))
            throw config_error("gen_balanced: tilt ratio leaves the gamma-balanced band");
        const double wmax = std::max(p.r0, p.r1);
        while (static_cast<long>(pts.size()) < p.n) {
            point<double> q = detail::triangle_sample(g, p.a, p.b, p.c);
            const double w = p.r0 + (p.r1 - p.r0) * (q.x - xmin) / (xmax - xmin);
            if (g.uniform01() * wmax <= w) pts.push_back(q);
        }
    }

    std::map<std::string, std::string> meta{
        {"family", "balanced"},
        {"n", std::to_string(p.n)},
        {"gamma", format_double(p.gamma)},
        {"tilt", p.tilt == tilt_kind::uniform ? "uniform" : "linear-x"},
        {"r0", format_double(p.r0)},
        {"r1", format_double(p.r1)},
        {"seed", std::to_string(p.seed)},
    };
    const int mm = fit_m(pts);
    return make_instance<double>(mm, std::move(pts), std::move(meta));
}

}  // namespace chordbench
