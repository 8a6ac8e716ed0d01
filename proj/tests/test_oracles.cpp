#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "chordbench/generators.hpp"
#include "chordbench/oracles.hpp"
#include "support/fuzz.hpp"

using namespace chordbench;

namespace {

rational rat(long n, long d = 1) {
    rational r(n, d);
    r.canonicalize();  // mpq comparisons require the canonical form
    return r;
}

point<rational> pt(const rational& x, const rational& y) { return {x, y}; }

instance<rational> two_points() {
    return make_instance<rational>(2, {pt(rat(1), rat(2)), pt(rat(2), rat(1))});
}

rational h_value(const point<rational>& p, const query_slope<rational>& lam) {
    if (lam.infinite) return p.x;
    return p.y + lam.value * p.x;
}

rational min_h(const instance<rational>& inst, const query_slope<rational>& lam) {
    rational best = h_value(inst.points.front(), lam);
    for (const auto& p : inst.points) {
        const rational h = h_value(p, lam);
        if (h < best) best = h;
    }
    return best;
}

}  // namespace

TEST_CASE("exact oracle basics") {
    const auto inst = two_points();
    exact_oracle<rational> oracle(inst);
    CHECK(oracle.answer(query_slope<rational>::finite(rat(2))) == pt(rat(1), rat(2)));
    CHECK(oracle.answer(query_slope<rational>::finite(rat(1, 2))) == pt(rat(2), rat(1)));
    CHECK(oracle.calls() == 2);
    CHECK(oracle.m() == 2);
    CHECK_THROWS_AS(oracle.answer(query_slope<rational>::finite(rat(-1))), domain_error);
}

TEST_CASE("exact oracle tie policies") {
    const auto inst = two_points();
    exact_oracle<rational> lm(inst, tie_break::leftmost);
    exact_oracle<rational> rm(inst, tie_break::rightmost);
    const auto lam1 = query_slope<rational>::finite(rat(1));
    CHECK(lm.answer(lam1) == pt(rat(1), rat(2)));
    CHECK(rm.answer(lam1) == pt(rat(2), rat(1)));

    // staircase family: q_1 and q_2 are tied at the slope of ab
    ig_params p;
    p.k = 4;
    p.j = 3;
    const auto ig = gen_ig(p);
    exact_oracle<rational> iglm(ig, tie_break::leftmost);
    exact_oracle<rational> igrm(ig, tie_break::rightmost);
    CHECK(iglm.answer(lam1) == pt(rat(1), rat(5, 4)));
    CHECK(igrm.answer(lam1) == pt(rat(6, 5), rat(21, 20)));

    // the perturbed variant makes q_1 the unique minimizer
    ig_params pp = p;
    pp.perturb = true;
    const auto igp = gen_ig(pp);
    exact_oracle<rational> pert(igp, tie_break::rightmost);
    CHECK(pert.answer(lam1) == igp.points[1]);
    CHECK(igp.points[1].x == rat(1));
}

TEST_CASE("exact oracle extreme slopes") {
    ig_params p;
    p.k = 4;
    p.j = 3;
    const auto ig = gen_ig(p);
    exact_oracle<rational> lm(ig, tie_break::leftmost);
    exact_oracle<rational> rm(ig, tie_break::rightmost);
    // two points share the minimum x; the leftmost walk starts at the top
    CHECK(lm.answer(query_slope<rational>::infinity()) == pt(rat(1), rat(2)));
    CHECK(rm.answer(query_slope<rational>::infinity()) == pt(rat(1), rat(5, 4)));
    CHECK(lm.answer(query_slope<rational>::finite(rat(0))) == pt(rat(2), rat(1)));
}

TEST_CASE("delta oracle reply policies") {
    const auto inst = make_instance<rational>(
        2, {pt(rat(1), rat(2)), pt(rat(2), rat(1)), pt(rat(7, 5), rat(17, 10))});
    const auto lam1 = query_slope<rational>::finite(rat(1));

    delta_oracle<rational> worst(inst, rat(1, 20), delta_mode::worst);
    CHECK(worst.answer(lam1) == pt(rat(7, 5), rat(17, 10)));

    delta_oracle<rational> best(inst, rat(1, 20), delta_mode::best);
    CHECK(best.answer(lam1) == pt(rat(1), rat(2)));

    CHECK_THROWS_AS(delta_oracle<rational>(inst, rat(-1, 10), delta_mode::best), config_error);
}

TEST_CASE("delta oracle with delta zero collapses to exact") {
    auto g = fuzz::stream(91);
    for (int iter = 0; iter < 20; ++iter) {
        const auto inst = fuzz::mixed_instance(g, 8);
        exact_oracle<rational> exact(inst);
        delta_oracle<rational> db(inst, rat(0), delta_mode::best);
        delta_oracle<rational> dw(inst, rat(0), delta_mode::worst);
        delta_oracle<rational> dr(inst, rat(0), delta_mode::random, tie_break::leftmost, 7);
        for (long num = 0; num < 5; ++num) {
            const auto lam = num == 0 ? query_slope<rational>::infinity()
                                      : query_slope<rational>::finite(rat(num, 3));
            const auto want = exact.answer(lam);
            CHECK(db.answer(lam) == want);
            CHECK(dw.answer(lam) == want);
            CHECK(dr.answer(lam) == want);
        }
    }
}

TEST_CASE("delta oracle answers are always admissible") {
    auto g = fuzz::stream(101);
    for (int iter = 0; iter < 20; ++iter) {
        const auto inst = fuzz::mixed_instance(g, 10);
        const rational delta = rat(1 + static_cast<long>(g.below(8)), 16);
        for (const auto mode : {delta_mode::best, delta_mode::worst, delta_mode::random}) {
            delta_oracle<rational> oracle(inst, delta, mode, tie_break::leftmost, 11 + iter);
            for (int qi = 0; qi < 4; ++qi) {
                const auto lam = query_slope<rational>::finite(rat(1 + g.below(12), 4));
                const auto q = oracle.answer(lam);
                // certificate: no point strictly below the scaled line through q
                CHECK(h_value(q, lam) <= (1 + delta) * min_h(inst, lam));
            }
        }
    }
}

TEST_CASE("delta oracle random replies are seed-deterministic") {
    const auto inst = make_instance<rational>(
        2, {pt(rat(1), rat(2)), pt(rat(2), rat(1)), pt(rat(7, 5), rat(17, 10))});
    const auto lam = query_slope<rational>::finite(rat(1));
    std::vector<point<rational>> first, second;
    for (int pass = 0; pass < 2; ++pass) {
        delta_oracle<rational> oracle(inst, rat(1, 2), delta_mode::random, tie_break::leftmost,
                                      1234);
        auto& sink = pass == 0 ? first : second;
        for (int i = 0; i < 10; ++i) sink.push_back(oracle.answer(lam));
    }
    CHECK(first == second);
}

TEST_CASE("prefix oracle regions") {
    ig_params p;
    p.k = 4;
    p.j = 3;
    const auto base = gen_ig(p);  // ground chain q_0..q_5, j = 3
    REQUIRE(base.points.size() == 6);

    prefix_oracle<rational> ell2(base, 2);
    CHECK(ell2.answer(query_slope<rational>::infinity()) == base.points[0]);
    CHECK(ell2.answer(query_slope<rational>::finite(rat(0))) == base.points[5]);
    // region 1 is (1, inf); region 2 is (1/4, 1]; region 3 is (1/16, 1/4]
    CHECK(ell2.answer(query_slope<rational>::finite(rat(2))) == base.points[1]);
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1))) == base.points[2]);
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1, 2))) == base.points[2]);
    // one region past the prefix: the deepest kept vertex answers
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1, 8))) == base.points[2]);
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1, 4))) == base.points[2]);
    // far past the prefix: the bottom point answers
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1, 32))) == base.points[5]);
    CHECK(ell2.answer(query_slope<rational>::finite(rat(1, 1000))) == base.points[5]);
    CHECK(ell2.calls() == 9);

    prefix_oracle<rational> ell3(base, 3);
    CHECK(ell3.answer(query_slope<rational>::finite(rat(1, 8))) == base.points[3]);
    CHECK(ell3.answer(query_slope<rational>::finite(rat(1, 32))) == base.points[3]);

    CHECK_THROWS_AS(prefix_oracle<rational>(base, 0), config_error);
    CHECK_THROWS_AS(prefix_oracle<rational>(base, 4), config_error);
    CHECK_THROWS_AS(ell2.answer(query_slope<rational>::finite(rat(-1))), domain_error);
}

TEST_CASE("prefix oracle implements its materialized instance") {
    ig_params p;
    p.k = 8;
    p.j = 4;
    const auto base = gen_ig(p);
    for (int ell = 1; ell <= 4; ++ell) {
        prefix_oracle<rational> oracle(base, ell);
        const auto inst = oracle.materialize();
        CHECK(inst.points.size() == static_cast<std::size_t>(ell) + 2);
        CHECK(inst.points.front() == base.points.front());
        CHECK(inst.points.back() == base.points.back());
        CHECK(inst.meta.at("family") == "prefix");
        // every reply is a valid comb minimizer for the prefix instance
        for (long num = 1; num <= 40; ++num) {
            const auto lam = query_slope<rational>::finite(rat(num, 24));
            const auto q = oracle.answer(lam);
            CHECK(h_value(q, lam) == min_h(inst, lam));
        }
    }
}

TEST_CASE("adversary first reply") {
    adversary_state<rational> adv(4);
    CHECK(adv.certified_error() == rat(1));
    CHECK(adv.answer(query_slope<rational>::infinity()) == pt(rat(0), rat(1)));
    CHECK(adv.answer(query_slope<rational>::finite(rat(0))) == pt(rat(1), rat(0)));
    CHECK(adv.queries() == 0);  // frame corners commit nothing
    CHECK(adv.answer(query_slope<rational>::finite(rat(1))) == pt(rat(0), rat(1, 8)));
    CHECK(adv.xstar() == rat(1, 8));
    CHECK(adv.certified_error() == rat(7, 8));
    CHECK_THROWS_AS(adv.answer(query_slope<rational>::finite(rat(-2))), domain_error);

    // a shallow first query scales the reply down
    adversary_state<rational> shallow(4);
    CHECK(shallow.answer(query_slope<rational>::finite(rat(1, 2))) == pt(rat(0), rat(1, 16)));

    CHECK_THROWS_AS(adversary_state<rational>(1), config_error);
}

TEST_CASE("adversary clamps non-decreasing slopes") {
    adversary_state<rational> adv(4);
    const auto q1 = adv.answer(query_slope<rational>::finite(rat(1)));
    CHECK(adv.answer(query_slope<rational>::finite(rat(1))) == q1);
    CHECK(adv.answer(query_slope<rational>::finite(rat(3))) == q1);
    CHECK(adv.queries() == 1);
    CHECK(adv.certified_error() == rat(7, 8));
}

TEST_CASE("adversary duel, chord strategy, k = 4") {
    const auto duel = adversary_duel<rational>(4, duel_strategy::chord);
    REQUIRE(duel.queries.size() == 3);
    CHECK(duel.queries[0].value == rat(1));
    CHECK(duel.queries[1].value == rat(1, 8));
    CHECK(duel.queries[2].value == rat(1, 57));
    REQUIRE(duel.errors.size() == 3);
    CHECK(duel.errors[0] == rat(7, 8));
    CHECK(duel.errors[1] == rat(49, 64));
    CHECK(duel.errors[2] == rat(2401, 3648));
    for (const auto& e : duel.errors) CHECK(e > rat(1, 2));

    const auto& inst = duel.finalized;
    REQUIRE(inst.points.size() == 6);
    CHECK(inst.points[0] == pt(rat(1), rat(2)));
    CHECK(inst.points[1] == pt(rat(1), rat(9, 8)));
    CHECK(inst.points[2] == pt(rat(71, 64), rat(65, 64)));
    CHECK(inst.points[3] == pt(rat(4439, 3648), rat(457, 456)));
    CHECK(inst.points[4] == pt(rat(4895, 3648), rat(1)));
    CHECK(inst.points[5] == pt(rat(2), rat(1)));
    CHECK(inst.meta.at("family") == "adversary");
    CHECK(inst.meta.at("queries") == "3");

    REQUIRE(duel.witness.size() == 3);
    CHECK(duel.witness[1] == pt(rat(4895, 3648), rat(1)));

    // the witness three-point set is strictly better than the certified error
    const auto cov = coverage_error(inst.points, duel.witness, metric_kind::horizontal);
    CHECK(cov.covered);
    CHECK(cov.worst == rat(8729, 29184));
    CHECK(cov.worst < rat(4895, 3648) - 1);          // < x(q*) in frame coordinates
    CHECK(cov.worst <= rat(1, 2) - rat(1, 8));       // <= 1/2 - 1/(2k)
}

TEST_CASE("adversary duel, bisection strategy, k = 4") {
    const auto duel = adversary_duel<rational>(4, duel_strategy::bisect);
    REQUIRE(duel.errors.size() == 3);
    CHECK(duel.queries[1].value == rat(1, 2));
    CHECK(duel.queries[2].value == rat(1, 4));
    CHECK(duel.errors[2] == rat(3119, 3648));
    for (const auto& e : duel.errors) CHECK(e > rat(1, 2));
}

TEST_CASE("adversary duel, scripted strategy") {
    const std::vector<query_slope<rational>> script{query_slope<rational>::finite(rat(1, 2)),
                                                    query_slope<rational>::finite(rat(1, 3))};
    const auto duel = adversary_duel<rational>(5, duel_strategy::scripted, script);
    CHECK(duel.queries.size() == 2);
    CHECK(duel.errors.size() == 2);
    CHECK(duel.finalized.points.size() == 5);

    const auto empty = adversary_duel<rational>(3, duel_strategy::scripted, {});
    CHECK(empty.queries.empty());
    CHECK(empty.witness.size() == 2);
    CHECK(empty.finalized.points.size() == 2);
}

TEST_CASE("adversary state transitions") {
    adversary_state<rational> adv(3);
    adv.answer(query_slope<rational>::finite(rat(1)));
    const auto inst = adv.finalize();
    CHECK(inst.points.size() == 4);
    CHECK(adv.finalized());
    CHECK_THROWS_AS(adv.answer(query_slope<rational>::finite(rat(1, 2))), state_error);
    CHECK_THROWS_AS(adv.finalize(), state_error);

    adversary_state<rational> fresh(3);
    CHECK_THROWS_AS(fresh.xstar(), state_error);
}

TEST_CASE("replaying a duel against the finalized instance is consistent") {
    const auto duel = adversary_duel<rational>(4, duel_strategy::chord);
    exact_oracle<rational> oracle(duel.finalized, tie_break::leftmost);
    // the interior points, in placement order, are points[1..3] of the
    // finalized instance; each recorded query must reproduce its reply
    for (std::size_t i = 0; i < duel.queries.size(); ++i) {
        CHECK(oracle.answer(duel.queries[i]) == duel.finalized.points[i + 1]);
    }
}

TEST_CASE("adversary invariant x(q_i*) <= i/(2k)") {
    for (int k : {2, 3, 4, 8}) {
        for (const auto strat : {duel_strategy::chord, duel_strategy::bisect}) {
            adversary_state<rational> adv(k);
            query_slope<rational> lam = query_slope<rational>::finite(rat(1));
            point<rational> last{};
            for (int i = 1; i < k; ++i) {
                if (i > 1) {
                    lam = strat == duel_strategy::chord
                              ? query_slope<rational>::finite(last.y / (1 - last.x))
                              : query_slope<rational>::finite(lam.value / 2);
                }
                last = adv.answer(lam);
                CHECK(adv.xstar() <= rat(i, 2 * k));
                CHECK(adv.certified_error() > rat(1, 2));
            }
        }
    }
}
