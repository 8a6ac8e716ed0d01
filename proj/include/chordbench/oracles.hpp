#pragma once

// Comb oracles: the query model underlying the chord algorithm.  A comb query
// asks for a point minimizing h_lambda(p) = y(p) + lambda * x(p); lambda =
// +inf degenerates to "leftmost point", lambda = 0 to "lowest point".
//
// Implementations here: the exact oracle over a concrete instance, the
// delta-approximate oracle (admissible set + a reply policy), the prefix
// family oracle used to probe what a search algorithm can distinguish, and
// the adaptive adversary that answers queries while committing to as little
// as possible.

#include <vector>

#include "chordbench/errors.hpp"
#include "chordbench/geometry.hpp"
#include "chordbench/instance.hpp"
#include "chordbench/kernels.hpp"
#include "chordbench/rng.hpp"
#include "chordbench/scalars.hpp"

namespace chordbench {

enum class tie_break { leftmost, rightmost };

inline const char* tie_break_name(tie_break t) {
    return t == tie_break::leftmost ? "leftmost" : "rightmost";
}

template <class S>
class comb_oracle {
  public:
    virtual ~comb_oracle() = default;
    virtual point<S> answer(const query_slope<S>& lambda) = 0;
    virtual int m() const = 0;
};

namespace detail {

// Strict total order "i is a better reply than j" for a given query slope.
// Ties in the primary objective are resolved by the tie-break policy:
// leftmost walks the envelope from the top-left (so a +inf query takes the
// highest of the leftmost points), rightmost from the bottom-right.
template <class S>
bool better_reply(const std::vector<point<S>>& pts, const query_slope<S>& lam, tie_break tb,
                  std::size_t i, std::size_t j) {
    const point<S>& a = pts[i];
    const point<S>& b = pts[j];
    if (lam.infinite) {
        if (a.x != b.x) return a.x < b.x;
        return tb == tie_break::leftmost ? a.y > b.y : a.y < b.y;
    }
    if (lam.is_zero()) {
        if (a.y != b.y) return a.y < b.y;
        return tb == tie_break::leftmost ? a.x < b.x : a.x > b.x;
    }
    S ha = S(a.y + lam.value * a.x);
    S hb = S(b.y + lam.value * b.x);
    if (ha != hb) return ha < hb;
    return tb == tie_break::leftmost ? a.x < b.x : a.x > b.x;
}

}  // namespace detail

template <class S>
class exact_oracle : public comb_oracle<S> {
  public:
    explicit exact_oracle(const instance<S>& inst, tie_break tb = tie_break::leftmost)
        : inst_(inst), tb_(tb) {}

    point<S> answer(const query_slope<S>& lambda) override {
        if (!lambda.infinite && lambda.value < 0)
            throw domain_error("comb query: negative slope");
        ++calls_;
        std::size_t best = kernels::best_index(inst_.points.size(), [&](std::size_t i, std::size_t j) {
            return detail::better_reply(inst_.points, lambda, tb_, i, j);
        });
        return inst_.points[best];
    }

    int m() const override { return inst_.m; }
    long calls() const { return calls_; }

  private:
    const instance<S>& inst_;
    tie_break tb_;
    long calls_ = 0;
};

enum class delta_mode { best, worst, random };

inline const char* delta_mode_name(delta_mode m) {
    switch (m) {
        case delta_mode::best: return "best";
        case delta_mode::worst: return "worst";
        case delta_mode::random: return "random";
    }
    return "?";
}

// (1+delta)-approximate oracle: any point whose objective is within a factor
// (1+delta) of the optimum is an admissible reply.  `best` returns the true
// minimizer, `worst` the admissible point with the largest objective, and
// `random` a uniformly seeded admissible point.  delta = 0 collapses to the
// exact oracle under every mode.
template <class S>
class delta_oracle : public comb_oracle<S> {
  public:
    delta_oracle(const instance<S>& inst, const S& delta, delta_mode mode,
                 tie_break tb = tie_break::leftmost, std::uint64_t seed = 0)
        : inst_(inst), delta_(delta), mode_(mode), tb_(tb), rng_(seed) {
        if (delta < 0) throw config_error("delta_oracle: delta must be >= 0");
    }

    point<S> answer(const query_slope<S>& lambda) override {
        if (!lambda.infinite && lambda.value < 0)
            throw domain_error("comb query: negative slope");
        ++calls_;
        const auto& pts = inst_.points;
        auto key = [&](const point<S>& p) -> S {
            if (lambda.infinite) return p.x;
            if (lambda.is_zero()) return p.y;
            return S(p.y + lambda.value * p.x);
        };
        std::size_t best = kernels::best_index(pts.size(), [&](std::size_t i, std::size_t j) {
            return detail::better_reply(pts, lambda, tb_, i, j);
        });
        if (mode_ == delta_mode::best || delta_ == 0) return pts[best];

        const S threshold = S((1 + delta_) * key(pts[best]));
        std::vector<std::size_t> admissible;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (key(pts[i]) <= threshold) admissible.push_back(i);

        if (mode_ == delta_mode::random)
            return pts[admissible[rng_.below(admissible.size())]];

        // worst: largest objective among admissible replies, ties by policy
        std::size_t w = admissible[0];
        for (std::size_t idx : admissible) {
            S kw = key(pts[w]);
            S ki = key(pts[idx]);
            if (ki > kw || (ki == kw && detail::better_reply(pts, lambda, tb_, w, idx)))
                w = idx;
        }
        return pts[w];
    }

    int m() const override { return inst_.m; }
    long calls() const { return calls_; }

  private:
    const instance<S>& inst_;
    S delta_;
    delta_mode mode_;
    tie_break tb_;
    rng_stream rng_;
    long calls_ = 0;
};

// --- prefix family ----------------------------------------------------------

// Oracle for the instance family {I_1, ..., I_j} built over a staircase
// ground chain Q = {q_0, q_1, ..., q_{j+1}, q_{j+2}}: I_ell keeps the prefix
// {q_0, q_1..q_ell, q_{j+2}}.  Replies are decided per slope region between
// consecutive ground-chain edge slopes; a query on a region boundary answers
// the lower region's vertex.  For ground chains built by the staircase
// generator the region boundaries coincide with the true minimizer switches
// of every I_ell, which is what makes per-region replies sound.
template <class S>
class prefix_oracle : public comb_oracle<S> {
  public:
    prefix_oracle(const instance<S>& base, int ell) : base_(base), ell_(ell) {
        const auto& q = base.points;
        if (q.size() < 4) throw config_error("prefix_oracle: ground chain too small");
        const int j = static_cast<int>(q.size()) - 3;
        if (ell < 1 || ell > j) throw config_error("prefix_oracle: ell out of range");
        slopes_.resize(q.size());
        for (std::size_t i = 1; i < q.size(); ++i) {
            const auto& u = q[i - 1];
            const auto& v = q[i];
            if (v.x == u.x) {
                slopes_[i] = query_slope<S>::infinity();
            } else {
                slopes_[i] = query_slope<S>::finite(S((u.y - v.y) / (v.x - u.x)));
            }
            if (i >= 2 && !(slopes_[i] < slopes_[i - 1]))
                throw config_error("prefix_oracle: ground chain is not strictly convex");
        }
    }

    point<S> answer(const query_slope<S>& lambda) override {
        if (!lambda.infinite && lambda.value < 0)
            throw domain_error("comb query: negative slope");
        ++calls_;
        const auto& q = base_.points;
        const std::size_t n = q.size();
        if (lambda.infinite) return q[0];
        if (lambda.is_zero()) return q[n - 1];
        // region i covers (slope_{i+1}, slope_i]; below the last edge slope
        // the reply is always the bottom point
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (slopes_[i + 1] < lambda) {
                const int region = static_cast<int>(i);
                if (ell_ >= region) return q[i];
                if (ell_ == region - 1) return q[static_cast<std::size_t>(ell_)];
                return q[n - 1];
            }
        }
        return q[n - 1];
    }

    int m() const override { return base_.m; }
    long calls() const { return calls_; }
    int ell() const { return ell_; }

    // the instance this oracle has been answering for
    instance<S> materialize() const {
        const auto& q = base_.points;
        std::vector<point<S>> pts(q.begin(), q.begin() + ell_ + 1);
        pts.push_back(q.back());
        return make_instance<S>(base_.m, std::move(pts), {{"family", "prefix"}});
    }

  private:
    const instance<S>& base_;
    int ell_;
    std::vector<query_slope<S>> slopes_;
    long calls_ = 0;
};

// --- adaptive adversary -----------------------------------------------------

// Adversary for the query lower bound.  It plays in the frame c = (0,0),
// a = (0,1), b = (1,0) and keeps the invariant x(q_i^*) <= i/(2k), so its
namespace detail {

// Round a positive rational to `sig` significant bits, toward zero or away
// from it.  floor/ceil of v * 2^shift, divided back out.
inline rational round_sig_bits(const rational& v, long sig, bool up) {
    const long num_bits = static_cast<long>(mpz_sizeinbase(v.get_num().get_mpz_t(), 2));
    const long den_bits = static_cast<long>(mpz_sizeinbase(v.get_den().get_mpz_t(), 2));
    const long shift = sig - (num_bits - den_bits);
    mpz_class num = v.get_num();
    mpz_class den = v.get_den();
    if (shift >= 0)
        mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    else
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    mpz_class q;
    if (up)
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    else
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (shift >= 0) {
        mpz_class unit(1);
        mpz_mul_2exp(unit.get_mpz_t(), unit.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
        rational r(q, unit);
        r.canonicalize();
        return r;
    }
    mpz_mul_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    return rational(q);
}

// Identity for inexact scalars; for rationals, compacts a coordinate once its
// representation outgrows ~128 bits.  The adversary is free to answer with
// any point consistent with its commitments, so it trades a sliver of forced
// error (under 2^-90 per round, against margins of order 1/k) for bounded
// representations: y rounds down and x rounds up, which keeps the reply
// weakly right of every support line and so keeps every earlier reply
// minimal for its own query.
template <class S>
S compact_reply(const S& v, bool /*up*/) {
    return v;
}

template <>
inline rational compact_reply<rational>(const rational& v, bool up) {
    constexpr long bit_cap = 128;
    constexpr long sig = 96;
    if (sgn(v) == 0) return v;
    if (static_cast<long>(mpz_sizeinbase(v.get_num().get_mpz_t(), 2)) <= bit_cap &&
        static_cast<long>(mpz_sizeinbase(v.get_den().get_mpz_t(), 2)) <= bit_cap)
        return v;
    return round_sig_bits(v, sig, up);
}

}  // namespace detail

// certified coverage error 1 - x(q_i^*) stays above 1/2 for the first k-1
// strictly-decreasing slopes.  Queries with non-decreasing slope are clamped
// (the previous reply is repeated and no state advances); +inf and 0 return
// the frame corners without consuming state.  finalize() freezes the point
// set and shifts it by (+1, +1) into the positive quadrant.
template <class S>
class adversary_state {
  public:
    explicit adversary_state(int k) : k_(k) {
        if (k < 2) throw config_error("adversary_state: k must be >= 2");
    }

    static point<S> frame_a() { return {S(0), S(1)}; }
    static point<S> frame_b() { return {S(1), S(0)}; }
    static point<S> frame_c() { return {S(0), S(0)}; }

    point<S> answer(const query_slope<S>& lambda) {
        if (finalized_) throw state_error("adversary_state: query after finalize");
        if (lambda.infinite) return frame_a();
        if (lambda.is_zero()) return frame_b();
        if (lambda.value < 0) throw domain_error("comb query: negative slope");
        if (steps_ >= 1 && !(lambda.value < lam_prev_)) return q_prev_;  // clamped

        const S two_k = S(scalar_traits<S>::from_long(2 * k_));
        S y_new, x_new;
        if (steps_ == 0) {
            y_new = S((lambda.value < 1 ? lambda.value : S(1)) / two_k);
            y_new = detail::compact_reply(y_new, false);
            x_new = S(0);
        } else {
            const S lam_qb = S(q_prev_.y / (S(1) - q_prev_.x));  // slope to frame b
            y_new = S((lambda.value < lam_qb ? lambda.value : lam_qb) / two_k);
            y_new = detail::compact_reply(y_new, false);
            x_new = S(xstar_prev_ - y_new / lam_prev_);
            x_new = detail::compact_reply(x_new, true);
        }
        const S xstar_new = S(x_new + y_new / lambda.value);

        lam_prev_ = lambda.value;
        q_prev_ = point<S>{x_new, y_new};
        xstar_prev_ = xstar_new;
        ++steps_;
        interior_.push_back(q_prev_);
        return q_prev_;
    }

    // coverage error (horizontal, frame coordinates) the adversary can still
    // force after the queries so far
    S certified_error() const {
        if (steps_ == 0) return S(1);
        return S(S(1) - xstar_prev_);
    }

    S xstar() const {
        if (steps_ == 0) throw state_error("adversary_state: no queries yet");
        return xstar_prev_;
    }

    int queries() const { return steps_; }
    int k() const { return k_; }
    bool finalized() const { return finalized_; }

    instance<S> finalize() {
        if (finalized_) throw state_error("adversary_state: already finalized");
        finalized_ = true;
        std::vector<point<S>> pts;
        pts.push_back({S(1), S(2)});  // a
        for (const auto& q : interior_) pts.push_back({S(q.x + 1), S(q.y + 1)});
        if (steps_ >= 1) pts.push_back({S(xstar_prev_ + 1), S(1)});  // q_i^*
        pts.push_back({S(2), S(1)});  // b
        return make_instance<S>(1, std::move(pts),
                                {{"family", "adversary"},
                                 {"k", std::to_string(k_)},
                                 {"queries", std::to_string(steps_)}});
    }

  private:
    int k_;
    int steps_ = 0;
    bool finalized_ = false;
    S lam_prev_{};
    point<S> q_prev_{};
    S xstar_prev_{};
    std::vector<point<S>> interior_;
};

enum class duel_strategy { chord, bisect, scripted };

template <class S>
struct duel_result {
    int k = 0;
    std::vector<query_slope<S>> queries;
    std::vector<S> errors;  // certified error after each query
    chain<S> witness;       // {a, q^*, b}, translated
    instance<S> finalized;
};

// Play a query strategy against the adversary for k-1 rounds (or the script
// length) and finalize.  The chord strategy issues exactly the slopes the
// chord algorithm would: the a-b slope first, then the slope from the latest
// reply to b.
template <class S>
duel_result<S> adversary_duel(int k, duel_strategy strat,
                              const std::vector<query_slope<S>>& script = {}) {
    adversary_state<S> adv(k);
    duel_result<S> out;
    out.k = k;
    const std::size_t rounds = strat == duel_strategy::scripted
                                   ? script.size()
                                   : static_cast<std::size_t>(k - 1);
    query_slope<S> lam = query_slope<S>::finite(S(1));  // frame a-b slope
    point<S> last_reply{};
    for (std::size_t i = 0; i < rounds; ++i) {
        if (strat == duel_strategy::scripted) {
            lam = script[i];
        } else if (i > 0) {
            if (strat == duel_strategy::chord) {
                // slope from the latest reply to the frame b corner
                lam = query_slope<S>::finite(S(last_reply.y / (S(1) - last_reply.x)));
            } else {
                lam = query_slope<S>::finite(S(lam.value / 2));
            }
        }
        last_reply = adv.answer(lam);
        out.queries.push_back(lam);
        out.errors.push_back(adv.certified_error());
    }
    if (adv.queries() >= 1) {
        out.witness = {point<S>{S(1), S(2)}, point<S>{S(adv.xstar() + 1), S(1)},
                       point<S>{S(2), S(1)}};
    } else {
        out.witness = {point<S>{S(1), S(2)}, point<S>{S(2), S(1)}};
    }
    out.finalized = adv.finalize();
    return out;
}

}  // namespace chordbench
