#include <doctest.h>

#include <numeric>

#include "randapprox/approxsets.hpp"
#include "randapprox/overlap_kernel.hpp"
#include "randapprox/randmodel.hpp"
#include "randapprox/sweep.hpp"
#include "test_util.hpp"

using namespace randapprox;
using testutil::TestRng;

namespace {

Rat r(long num, long den = 1) { return Rat(Int(num), Int(den)); }

Dyadic64 dyadic(long num, long den) {
    return Dyadic64{static_cast<std::uint64_t>((Int(num) << 64) / den)};
}

NumeratorSet explicit_set(std::uint64_t n, std::vector<std::uint64_t> members) {
    NumeratorSet s;
    s.n = n;
    s.kind = SetKind::Explicit;
    s.members = std::move(members);
    return s;
}

}  // namespace

TEST_CASE("build_e: disjoint arcs and the exact measure law") {
    const ApproxSet e = build_e(explicit_set(4, {1, 2, 3, 4}), dyadic(1, 4));
    CHECK(e.arcs.size() == 5);  // the a = 4 arc wraps into two pieces
    CHECK(e.arcs.measure() == r(1, 2));

    CHECK(build_e(explicit_set(9, {}), dyadic(1, 4)).arcs.measure() == 0);
    CHECK(build_e(explicit_set(9, {1, 5}), Dyadic64{0}).arcs.measure() == 0);

    std::vector<std::uint64_t> all(12);
    std::iota(all.begin(), all.end(), 1);
    const ApproxSet full = build_e(explicit_set(12, all), dyadic(1, 2));
    CHECK(full.arcs.measure() == 1);  // circle minus n touching endpoints
}

TEST_CASE("build_e: random cases obey |A| 2 psi / n") {
    TestRng rng(3001);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint64_t n = 1 + rng.below(2000);
        const std::uint64_t psi_units = rng.below((std::uint64_t{1} << 63) + 1);
        std::vector<std::uint64_t> members;
        for (std::uint64_t a = 1; a <= n; ++a)
            if (rng.below(3) == 0) members.push_back(a);
        const ApproxSet e = build_e(explicit_set(n, members), Dyadic64{psi_units});
        const Rat want = Rat(Int(members.size()) * 2 * Int(psi_units), Int(n) << 64);
        CHECK(e.arcs.measure() == want);
    }
}

TEST_CASE("build_e rejects out-of-range psi") {
    CHECK_THROWS_AS(build_e(explicit_set(3, {1}), Dyadic64{(std::uint64_t{1} << 63) + 1}), InputError);
}

TEST_CASE("overlap: worked example E_2^S vs E_3^S") {
    const Rat eps = r(1);
    const ApproxSet e2 = build_e(s_set(2, eps), dyadic(1, 4));
    const ApproxSet e3 = build_e(s_set(3, eps), dyadic(1, 4));
    CHECK(s_set(2, eps).members == std::vector<std::uint64_t>{1});
    CHECK(s_set(3, eps).members == std::vector<std::uint64_t>{1, 2});
    CHECK(overlap(e2, e3) == r(1, 12));
    CHECK(overlap(e2, e2) == e2.arcs.measure());
    CHECK(overlap(e2, e3, Arc::half(r(0), r(1))) == r(1, 12));
}

TEST_CASE("expected_measure_q examples") {
    const Arc full = Arc::half(r(0), r(1));
    const PsiSpec psi = PsiSpec::constant(r(1, 4));
    CHECK(expected_measure_q(10, psi, ProbSpec::constant(r(1)), r(1), full) ==
          build_e(s_set(10, r(1)), dyadic(1, 4)).arcs.measure());
    CHECK(expected_measure_q(10, psi, ProbSpec::constant(r(0)), r(1), full) == 0);
    CHECK(expected_measure_q(10, psi, ProbSpec::constant(r(1, 2)), r(1), full) == r(1, 10));
}

TEST_CASE("expected_measure_q: Monte Carlo cross-check") {
    const PsiSpec psi = PsiSpec::constant(r(1, 4));
    const ProbSpec p = ProbSpec::constant(r(1, 2));
    const Arc j = Arc::half(r(0), r(1, 2));
    const Rat want = expected_measure_q(10, psi, p, r(1), j);
    Rat total = 0;
    constexpr std::uint64_t kTrials = 20000;
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const MembershipOracle oracle(trial_seed(2024, t), p, r(1), 10);
        total += clip(build_e(oracle.sample_q(10), dyadic(1, 4)).arcs, j).measure();
    }
    const double mean = rat_to_double(total / kTrials);
    // each trial value is at most 4 * 2 * (1/4) / 10 = 1/10; a generous
    // binomial bound keeps this robust at 4 sigma
    const double se = 0.05 / std::sqrt(static_cast<double>(kTrials));
    CHECK(std::abs(mean - rat_to_double(want)) <= 4.0 * se);
}

TEST_CASE("expected_overlap_q: exhaustive configuration oracle") {
    const PsiSpec psi = PsiSpec::constant(r(1, 4));
    const ProbSpec p = ProbSpec::constant(r(1, 2));
    CHECK(expected_overlap_q(2, 3, psi, p, r(1)) == r(1, 48));

    for (auto [m, n] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 3}, {3, 4}, {4, 5}}) {
        const NumeratorSet sm = s_set(m, r(1));
        const NumeratorSet sn = s_set(n, r(1));
        Rat expectation = 0;
        const std::uint64_t cm = sm.members.size(), cn = sn.members.size();
        for (std::uint64_t mask_m = 0; mask_m < (1ull << cm); ++mask_m) {
            for (std::uint64_t mask_n = 0; mask_n < (1ull << cn); ++mask_n) {
                std::vector<std::uint64_t> am, an;
                for (std::uint64_t i = 0; i < cm; ++i)
                    if (mask_m >> i & 1) am.push_back(sm.members[i]);
                for (std::uint64_t i = 0; i < cn; ++i)
                    if (mask_n >> i & 1) an.push_back(sn.members[i]);
                const Rat weight = Rat(Int(1), Int(1) << (cm + cn));
                expectation += weight * overlap(build_e(explicit_set(m, am), dyadic(1, 4)),
                                                build_e(explicit_set(n, an), dyadic(1, 4)));
            }
        }
        CHECK(expected_overlap_q(m, n, psi, p, r(1)) == expectation);
    }
}

TEST_CASE("expected_overlap_q: diagonal and disjoint cases") {
    const PsiSpec psi = PsiSpec::constant(r(1, 4));
    CHECK(expected_overlap_q(5, 5, psi, ProbSpec::constant(r(1)), r(1)) ==
          build_e(s_set(5, r(1)), dyadic(1, 4)).arcs.measure());
    // tiny widths around distinct centers: disjoint E-sets
    const PsiSpec narrow = PsiSpec::constant(r(1, 1024));
    CHECK(expected_overlap_q(2, 3, narrow, ProbSpec::constant(r(1, 2)), r(1)) == 0);
}

TEST_CASE("qk_profile: worked example and input checks") {
    const PsiSpec psi = PsiSpec::constant(r(1, 4));
    const QkProfile profile = qk_profile(2, 3, psi, r(1));
    REQUIRE(profile.counts.size() == 1);
    CHECK(profile.counts[0] == 2);
    CHECK(profile.max_count == 2);
    CHECK(profile.bound == r(15, 4));  // (2 * (1/4) / 2) * 3 + 3
    CHECK(profile.bound_ok);
    CHECK(profile.single_intersection);
    CHECK_THROWS_AS(qk_profile(3, 3, psi, r(1)), InputError);
    CHECK_THROWS_AS(qk_profile(3, 2, psi, r(1)), InputError);
    CHECK_THROWS_AS(qk_profile(2, 3, PsiSpec::constant(r(1, 2)), r(1)), InputError);
    CHECK_THROWS_AS(qk_profile(2, 3, PsiSpec::constant(r(0)), r(1)), InputError);
}

TEST_CASE("qk_profile: tiny widths give counts in {0, 1}") {
    const Dyadic64 tiny{std::uint64_t{1} << 44};  // 2^-20
    const QkProfile profile = qk_profile_sets(s_set(9, r(1)), tiny, s_set(14, r(1)), tiny);
    for (std::uint64_t c : profile.counts) CHECK(c <= 1);
    CHECK(profile.single_intersection);
}

TEST_CASE("qk_profile: empty explicit set gives an empty profile") {
    const QkProfile profile = qk_profile_sets(explicit_set(5, {}), Dyadic64{0}, s_set(9, r(1)), dyadic(1, 4));
    CHECK(profile.counts.empty());
    CHECK(profile.max_count == 0);
    CHECK(profile.bound_ok);
}

TEST_CASE("qk_profile: brute-force oracle on random pairs") {
    TestRng rng(3002);
    for (int trial = 0; trial < 30; ++trial) {
        const std::uint64_t m = 2 + rng.below(40);
        const std::uint64_t n = m + 1 + rng.below(60);
        const PsiSpec psi = PsiSpec::constant(r(1, 4 + static_cast<long>(rng.below(5))));
        const QkProfile profile = qk_profile(m, n, psi, r(1, 2));
        const ApproxSet em = build_e(s_set(m, r(1, 2)), eval_psi(psi, m));
        const ApproxSet en = build_e(s_set(n, r(1, 2)), eval_psi(psi, n));
        // oracle: count via exact pairwise interval intersections of the
        // logical (unsplit) arcs, working mod 1 through the IntervalUnion
        const NumeratorSet sm = s_set(m, r(1, 2));
        const NumeratorSet sn = s_set(n, r(1, 2));
        REQUIRE(profile.counts.size() == sm.members.size());
        std::uint64_t checked = 0;
        for (std::size_t k = 0; k < sm.members.size(); ++k) {
            const ApproxSet one = build_e(explicit_set(m, {sm.members[k]}), eval_psi(psi, m));
            std::uint64_t hits = 0;
            for (std::uint64_t b : sn.members) {
                const ApproxSet other = build_e(explicit_set(n, {b}), eval_psi(psi, n));
                if (intersect(one.arcs, other.arcs).measure() > 0) ++hits;
            }
            CHECK(profile.counts[k] == hits);
            checked += hits;
        }
        CHECK(checked >= profile.max_count);
        (void)em;
        (void)en;
    }
}

TEST_CASE("kernel: pairwise overlap units agree with IntervalUnion") {
    TestRng rng(3003);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t m = 1 + rng.below(60);
        const std::uint64_t n = 1 + rng.below(60);
        const std::uint64_t su = rng.below((std::uint64_t{1} << 63) + 1);
        const std::uint64_t sv = rng.below((std::uint64_t{1} << 63) + 1);
        std::vector<std::uint64_t> am, an;
        for (std::uint64_t a = 1; a <= m; ++a)
            if (rng.below(2)) am.push_back(a);
        for (std::uint64_t a = 1; a <= n; ++a)
            if (rng.below(2)) an.push_back(a);

        const std::uint64_t l = std::lcm(m, n);
        std::vector<std::pair<u128, u128>> sa, sb;
        kernel::scale_segments(am, m, su, u128{l / m}, sa);
        kernel::scale_segments(an, n, sv, u128{l / n}, sb);
        const u128 units = kernel::intersection_units(sa, sb);
        const Rat got = Rat(int_from_u128(units), Int(l) << 64);

        const Rat want = intersect(build_e(explicit_set(m, am), Dyadic64{su}).arcs,
                                   build_e(explicit_set(n, an), Dyadic64{sv}).arcs)
                             .measure();
        CHECK(got == want);
    }
}

TEST_CASE("kernel: clipped overlap agrees with clip + intersect") {
    TestRng rng(3004);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t m = 1 + rng.below(40);
        const std::uint64_t n = 1 + rng.below(40);
        const std::uint32_t parts = 1 + static_cast<std::uint32_t>(rng.below(5));
        const std::uint32_t j = static_cast<std::uint32_t>(rng.below(parts));
        const std::uint64_t su = rng.below(std::uint64_t{1} << 63);
        const std::uint64_t sv = rng.below(std::uint64_t{1} << 63);
        std::vector<std::uint64_t> am, an;
        for (std::uint64_t a = 1; a <= m; ++a)
            if (rng.below(2)) am.push_back(a);
        for (std::uint64_t a = 1; a <= n; ++a)
            if (rng.below(2)) an.push_back(a);

        const std::uint64_t l = std::lcm(m, n);
        std::vector<std::pair<u128, u128>> sa, sb;
        kernel::scale_segments(am, m, su, u128{parts} * (l / m), sa);
        kernel::scale_segments(an, n, sv, u128{parts} * (l / n), sb);
        const u128 arc_len = u128{l} << 64;
        const u128 units = kernel::intersection_units_clipped(sa, sb, arc_len * j, arc_len * (j + 1));
        const Rat got = Rat(int_from_u128(units), Int(l) * parts * (Int(1) << 64));

        const Arc window = Arc::half(Rat(Int(j), Int(parts)), Rat(Int(j + 1), Int(parts)));
        const Rat want = clip(intersect(build_e(explicit_set(m, am), Dyadic64{su}).arcs,
                                        build_e(explicit_set(n, an), Dyadic64{sv}).arcs),
                              window)
                             .measure();
        CHECK(got == want);
    }
}

TEST_CASE("sweep: depth integrals agree with pairwise brute force") {
    TestRng rng(3005);
    for (int trial = 0; trial < 25; ++trial) {
        const std::uint32_t parts = 1 + static_cast<std::uint32_t>(rng.below(4));
        const std::uint64_t n_cap = 3 + rng.below(30);
        std::vector<ApproxSet> sets;
        std::vector<SweepEvent> events;
        for (std::uint64_t n = 1; n <= n_cap; ++n) {
            const std::uint64_t s = rng.below(std::uint64_t{1} << 62);
            std::vector<std::uint64_t> members;
            for (std::uint64_t a = 1; a <= n; ++a)
                if (rng.below(2)) members.push_back(a);
            sets.push_back(build_e(explicit_set(n, members), Dyadic64{s}));
            if (!members.empty() && s > 0) append_interval_events(events, n, members, s, 1);
        }
        const DepthIntegrals ints = sweep_depth(events, parts, 0);
        for (std::uint32_t arc = 0; arc < parts; ++arc) {
            const Arc window = Arc::half(Rat(Int(arc), Int(parts)), Rat(Int(arc + 1), Int(parts)));
            Rat linear = 0, quadratic = 0;
            std::vector<Arc> covered_arcs;
            for (const ApproxSet& e : sets) {
                linear += clip(e.arcs, window).measure();
                for (const auto& [lo, hi] : e.arcs.arcs()) covered_arcs.push_back(Arc::open(lo, hi));
                for (const ApproxSet& f : sets)
                    quadratic += clip(intersect(e.arcs, f.arcs), window).measure();
            }
            CHECK(ints.linear[arc] == linear);
            CHECK(ints.quadratic[arc] == quadratic);
            CHECK(ints.covered[arc] == clip(normalize(covered_arcs), window).measure());
        }
    }
}

TEST_CASE("sweep: weighted integrals match weighted pairwise sums") {
    TestRng rng(3006);
    for (int trial = 0; trial < 15; ++trial) {
        const std::uint64_t n_cap = 2 + rng.below(16);
        std::vector<ApproxSet> sets;
        std::vector<Rat> weights;
        std::vector<SweepEvent> events;
        for (std::uint64_t n = 1; n <= n_cap; ++n) {
            const std::uint64_t s = rng.below(std::uint64_t{1} << 62);
            const std::uint64_t w = rng.below(std::uint64_t{1} << 63);  // weight units over 2^64
            std::vector<std::uint64_t> members;
            for (std::uint64_t a = 1; a <= n; ++a)
                if (rng.below(2)) members.push_back(a);
            sets.push_back(build_e(explicit_set(n, members), Dyadic64{s}));
            weights.emplace_back(Rat(Int(w), Int(1) << 64));
            if (!members.empty() && s > 0 && w > 0)
                append_interval_events(events, n, members, s, static_cast<i128>(w));
        }
        const DepthIntegrals ints = sweep_depth(events, 1, 64);
        Rat linear = 0, quadratic = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            linear += weights[i] * sets[i].arcs.measure();
            for (std::size_t j = 0; j < sets.size(); ++j)
                quadratic += weights[i] * weights[j] * intersect(sets[i].arcs, sets[j].arcs).measure();
        }
        CHECK(ints.linear[0] == linear);
        CHECK(ints.quadratic[0] == quadratic);
    }
}
