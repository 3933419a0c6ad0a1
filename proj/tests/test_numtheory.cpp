#include <doctest.h>

#include <numeric>

#include "randapprox/numtheory.hpp"
#include "test_util.hpp"

using namespace randapprox;
using testutil::TestRng;

namespace {

Rat r(long num, long den = 1) { return Rat(Int(num), Int(den)); }

// gcd-count oracle for phi
std::uint64_t phi_oracle(std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= n; ++a)
        if (std::gcd(a, n) == 1) ++count;
    return count;
}

// trial-division oracle for spf
std::uint64_t spf_oracle(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

std::vector<std::uint64_t> s_set_oracle(std::uint64_t n, const Rat& eps) {
    const long double t = reduction_threshold(n, eps);
    std::vector<std::uint64_t> out;
    for (std::uint64_t a = 1; a <= n; ++a)
        if (static_cast<long double>(std::gcd(a, n)) <= t) out.push_back(a);
    return out;
}

}  // namespace

TEST_CASE("sieve tables: phi and spf against oracles") {
    const SieveTables tables = build_sieve(2000);
    CHECK(tables.phi(12) == 4);
    CHECK(tables.phi(12) == phi_oracle(12));
    CHECK(tables.phi(1) == 1);
    CHECK(tables.spf(91) == 7);
    CHECK(tables.spf(91) == spf_oracle(91));
    TestRng rng(2001);
    for (int i = 0; i < 50; ++i) {
        const std::uint64_t n = 2 + rng.below(1999);
        CHECK(tables.phi(n) == phi_oracle(n));
        CHECK(tables.spf(n) == spf_oracle(n));
        CHECK(tables.phi(n) == phi_direct(n));
        // Gauss: sum of phi over divisors is n
        std::uint64_t total = 0;
        for (std::uint64_t d : tables.divisors(n)) total += tables.phi(d);
        CHECK(total == n);
    }
}

TEST_CASE("sieve tables: resource budget") {
    CHECK_THROWS_AS(build_sieve(1000, 100), ResourceError);
    CHECK_THROWS_AS(build_sieve(1), InputError);
}

TEST_CASE("s_membership examples") {
    CHECK(s_membership(3, 10, r(1)));        // gcd 1
    CHECK_FALSE(s_membership(2, 10, r(1)));  // gcd 2 > (ln 10)^{1/2}
    CHECK(s_membership(1, 1, r(1)));         // T(1) = 1 via the max floor
    CHECK_THROWS_AS(s_membership(11, 10, r(1)), InputError);
    CHECK_THROWS_AS(s_membership(0, 10, r(1)), InputError);
}

TEST_CASE("s_set examples") {
    CHECK(s_set(10, r(1)).members == std::vector<std::uint64_t>{1, 3, 7, 9});
    CHECK(s_set(12, r(1)).members == std::vector<std::uint64_t>{1, 5, 7, 11});
    const NumeratorSet s100 = s_set(100, r(1));
    CHECK(s100.members.size() == 60);  // phi(100) + phi(50)
    CHECK(s100.members.size() == phi_direct(100) + phi_direct(50));
    CHECK(s_set(1, r(1)).members == std::vector<std::uint64_t>{1});
}

TEST_CASE("s_set matches the brute-force scan oracle") {
    TestRng rng(2002);
    for (int i = 0; i < 40; ++i) {
        const std::uint64_t n = 2 + rng.below(800);
        const Rat eps = i % 2 ? r(1) : r(1, 2);
        CHECK(s_set(n, eps).members == s_set_oracle(n, eps));
    }
}

TEST_CASE("s_count_in_arc examples") {
    CHECK(s_count_in_arc(10, r(1), Arc::half(r(0), r(1, 2))) == 2);  // {1, 3}
    CHECK(s_count_in_arc(10, r(1), Arc::half(r(1, 2), r(1))) == 2);  // {7, 9}
    for (std::uint64_t n : {7ull, 10ull, 36ull, 97ull})
        CHECK(s_count_in_arc(n, r(1), Arc::half(r(0), r(1))) == s_set(n, r(1)).members.size());
}

TEST_CASE("s_count_in_arc: counts tile over a partition") {
    TestRng rng(2003);
    for (int i = 0; i < 25; ++i) {
        const std::uint64_t n = 2 + rng.below(500);
        const std::uint64_t m = 2 + rng.below(6);
        std::uint64_t total = 0;
        for (std::uint64_t k = 0; k < m; ++k)
            total += s_count_in_arc(n, r(1, 2), Arc::half(r(k, m), r(k + 1, m)));
        CHECK(total == s_set(n, r(1, 2)).members.size());
    }
}

TEST_CASE("s_count_in_arc: wrapping arc and the a = n member") {
    // J = [3/4, 5/4) wraps; a = n sits at position 0 inside it
    const Arc j = Arc::half(r(3, 4), r(5, 4));
    std::uint64_t count = 0;
    for (std::uint64_t a : s_set(12, r(1)).members) {
        const Rat pos = r(a % 12, 12);
        if (j.contains_point(pos)) ++count;
    }
    CHECK(s_count_in_arc(12, r(1), j) == count);
}

TEST_CASE("phi_divisor_sum examples") {
    CHECK(phi_divisor_sum(12, 2.0L) == 6);  // phi(12) + phi(6)
    for (std::uint64_t n : {1ull, 9ull, 12ull, 100ull}) {
        CHECK(phi_divisor_sum(n, static_cast<long double>(n)) == n);  // Gauss identity
        CHECK(phi_divisor_sum(n, 0.5L) == 0);
    }
}

TEST_CASE("phi_divisor_sum equals the gcd-count oracle") {
    TestRng rng(2004);
    const SieveTables tables = build_sieve(1200);
    for (int i = 0; i < 40; ++i) {
        const std::uint64_t n = 1 + rng.below(1200);
        const long double t = 1.0L + rng.below(8);
        std::uint64_t oracle = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
            if (static_cast<long double>(std::gcd(a, n)) <= t) ++oracle;
        CHECK(phi_divisor_sum(n, t) == oracle);
        CHECK(phi_divisor_sum(n, t, &tables) == oracle);
    }
}

TEST_CASE("two counting routes agree: |S_n| = phi_divisor_sum at T(n)") {
    const SieveTables tables = build_sieve(1500);
    for (std::uint64_t n = 2; n <= 1500; ++n) {
        CHECK(s_set(n, r(1)).members.size() == phi_divisor_sum_at(n, r(1), &tables));
        CHECK(s_set(n, r(1, 2)).members.size() == phi_divisor_sum_at(n, r(1, 2), &tables));
    }
}

TEST_CASE("s_decompose examples") {
    const auto d100 = s_decompose(100, r(1));
    REQUIRE(d100.size() == 2);
    CHECK(d100.at(1).size() == 40);
    CHECK(d100.at(2).size() == 20);
    const auto d7 = s_decompose(7, r(1));
    REQUIRE(d7.size() == 1);
    CHECK(d7.at(1) == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("s_decompose: scaled-copy structure and exact tiling") {
    TestRng rng(2005);
    for (int i = 0; i < 30; ++i) {
        const std::uint64_t n = 2 + rng.below(600);
        const Rat eps = i % 2 ? r(1) : r(1, 2);
        const auto decomposition = s_decompose(n, eps);
        std::vector<std::uint64_t> merged;
        for (const auto& [d, members] : decomposition) {
            CHECK(n % d == 0);
            CHECK(gcd_within_threshold(d, n, eps));
            for (std::uint64_t a : members) {
                CHECK(a % d == 0);
                CHECK(std::gcd(a, n) == d);  // S_n^{(d)} = d * S_{n/d}^{(1)}
                merged.push_back(a);
            }
        }
        std::sort(merged.begin(), merged.end());
        const auto direct = s_set(n, eps).members;
        CHECK(merged == direct);  // disjoint union tiles S_n
    }
}
