#include <doctest.h>

#include "randapprox/intervals.hpp"
#include "test_util.hpp"

using namespace randapprox;
using testutil::TestRng;

namespace {

Rat r(long num, long den = 1) { return Rat(Int(num), Int(den)); }

}  // namespace

TEST_CASE("normalize: empty input") {
    const IntervalUnion u = normalize({});
    CHECK(u.empty());
    CHECK(u.measure() == 0);
}

TEST_CASE("normalize: overlapping arcs merge") {
    const IntervalUnion v = normalize({Arc::open(r(1, 10), r(3, 10)), Arc::open(r(2, 10), r(4, 10))});
    CHECK(v.size() == 1);
    CHECK(v.arcs()[0].first == r(1, 10));
    CHECK(v.arcs()[0].second == r(4, 10));
    CHECK(v.measure() == r(3, 10));
}

TEST_CASE("normalize: wrapping arc splits at 0") {
    const IntervalUnion u = normalize({Arc::open(r(9, 10), r(12, 10))});
    REQUIRE(u.size() == 2);
    CHECK(u.arcs()[0] == std::pair<Rat, Rat>(r(0), r(2, 10)));
    CHECK(u.arcs()[1] == std::pair<Rat, Rat>(r(9, 10), r(1)));
    CHECK(u.measure() == r(3, 10));
}

TEST_CASE("normalize: touching arcs stay separate") {
    const IntervalUnion u = normalize({Arc::open(r(0), r(1, 2)), Arc::open(r(1, 2), r(1))});
    CHECK(u.size() == 2);
    CHECK(u.measure() == 1);
    CHECK_FALSE(contains(u, r(1, 2)));
}

TEST_CASE("normalize rejects bad arcs") {
    CHECK_THROWS_AS(Arc::open(r(1, 2), r(1, 2)), InputError);
    CHECK_THROWS_AS(Arc::open(r(0), r(3, 2)), InputError);
}

TEST_CASE("measure: full circle minus finitely many points") {
    std::vector<Arc> raw;
    for (long k = 0; k < 8; ++k) raw.push_back(Arc::open(r(k, 8), r(k + 1, 8)));
    const IntervalUnion u = normalize(raw);
    CHECK(u.measure() == 1);
    CHECK(u.size() == 8);
}

TEST_CASE("measure: single arc") {
    CHECK(normalize({Arc::open(r(3, 8), r(5, 8))}).measure() == r(1, 4));
}

TEST_CASE("intersect: with empty, with itself") {
    const IntervalUnion a = normalize({Arc::open(r(3, 8), r(5, 8))});
    CHECK(intersect(a, normalize({})).empty());
    const IntervalUnion self = intersect(a, a);
    CHECK(self.arcs() == a.arcs());
}

TEST_CASE("intersect: worked example") {
    // {(3/8,5/8)} ∩ {(1/4,5/12), (7/12,3/4)} = {(3/8,5/12), (7/12,5/8)}
    const IntervalUnion a = normalize({Arc::open(r(3, 8), r(5, 8))});
    const IntervalUnion b = normalize({Arc::open(r(1, 4), r(5, 12)), Arc::open(r(7, 12), r(3, 4))});
    const IntervalUnion isect = intersect(a, b);
    REQUIRE(isect.size() == 2);
    CHECK(isect.arcs()[0] == std::pair<Rat, Rat>(r(3, 8), r(5, 12)));
    CHECK(isect.arcs()[1] == std::pair<Rat, Rat>(r(7, 12), r(5, 8)));
    CHECK(isect.measure() == r(1, 12));
    CHECK(isect.measure() == testutil::oracle_intersection_measure(a, b, 24));
}

TEST_CASE("clip examples") {
    std::vector<Arc> full;
    full.push_back(Arc::open(r(0), r(1)));
    CHECK(clip(normalize(full), Arc::half(r(0), r(1, 4))).measure() == r(1, 4));
    CHECK(clip(normalize({}), Arc::half(r(0), r(1, 2))).empty());
    const IntervalUnion c = clip(normalize({Arc::open(r(3, 8), r(5, 8))}), Arc::half(r(0), r(1, 2)));
    REQUIRE(c.size() == 1);
    CHECK(c.arcs()[0] == std::pair<Rat, Rat>(r(3, 8), r(1, 2)));
    CHECK(c.measure() == r(1, 8));
}

TEST_CASE("clip: wrapping arc") {
    const IntervalUnion u = normalize({Arc::open(r(1, 8), r(7, 8))});
    const Arc j = Arc::half(r(3, 4), r(5, 4));  // wraps through 0
    const IntervalUnion c = clip(u, j);
    CHECK(c.measure() == r(1, 4));  // (3/4, 7/8) and (1/8, 1/4)
}

TEST_CASE("contains: strict endpoints") {
    const IntervalUnion u = normalize({Arc::open(r(3, 8), r(5, 8))});
    CHECK(contains(u, r(1, 2)));
    CHECK_FALSE(contains(u, r(3, 8)));
    CHECK_FALSE(contains(u, r(5, 8)));
    CHECK_FALSE(contains(normalize({}), r(1, 2)));
    CHECK(contains(u, r(3, 2)));  // reduced mod 1 to 1/2
}

TEST_CASE("property: intersect agrees with midpoint oracle") {
    TestRng rng(1001);
    for (int trial = 0; trial < 60; ++trial) {
        const IntervalUnion a = testutil::random_union(rng, 8);
        const IntervalUnion b = testutil::random_union(rng, 8);
        const IntervalUnion isect = intersect(a, b);
        CHECK(isect.measure() == testutil::oracle_intersection_measure(a, b, 960));
        CHECK(isect.measure() <= a.measure());
        CHECK(isect.measure() <= b.measure());
    }
}

TEST_CASE("property: intersect idempotent, commutative, associative") {
    TestRng rng(1002);
    for (int trial = 0; trial < 40; ++trial) {
        const IntervalUnion a = testutil::random_union(rng, 8);
        const IntervalUnion b = testutil::random_union(rng, 8);
        const IntervalUnion c = testutil::random_union(rng, 8);
        CHECK(intersect(a, a).measure() == a.measure());
        CHECK(intersect(a, b).arcs() == intersect(b, a).arcs());
        CHECK(intersect(intersect(a, b), c).arcs() == intersect(a, intersect(b, c)).arcs());
    }
}

TEST_CASE("property: inclusion-exclusion for two unions") {
    TestRng rng(1003);
    for (int trial = 0; trial < 40; ++trial) {
        const IntervalUnion a = testutil::random_union(rng, 8);
        const IntervalUnion b = testutil::random_union(rng, 8);
        std::vector<Arc> both;
        for (const auto& [lo, hi] : a.arcs()) both.push_back(Arc::open(lo, hi));
        for (const auto& [lo, hi] : b.arcs()) both.push_back(Arc::open(lo, hi));
        const IntervalUnion join = normalize(both);
        CHECK(a.measure() + b.measure() == join.measure() + intersect(a, b).measure());
    }
}

TEST_CASE("property: measure invariant under rotation") {
    TestRng rng(1004);
    for (int trial = 0; trial < 40; ++trial) {
        const IntervalUnion a = testutil::random_union(rng, 8);
        const Rat shift = Rat(Int(rng.below(959) + 1), Int(960));
        CHECK(rotated(a, shift).measure() == a.measure());
        CHECK(rotated(a, Rat(Int(7), Int(3))).measure() == a.measure());
    }
}

TEST_CASE("serialization: canonical quadruples") {
    const IntervalUnion u = normalize({Arc::open(r(9, 10), r(12, 10))});
    CHECK(to_json_array(u) == "[[\"0\",\"1\",\"1\",\"5\"],[\"9\",\"10\",\"1\",\"1\"]]");
    CHECK(to_json_array(normalize({})) == "[]");
}
