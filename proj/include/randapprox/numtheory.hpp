#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "randapprox/intervals.hpp"
#include "randapprox/rational.hpp"

namespace randapprox {

enum class SetKind { P, S, Q, Explicit };

// A finite set of numerators a in [1, n], sorted ascending.
struct NumeratorSet {
    std::uint64_t n = 0;
    SetKind kind = SetKind::Explicit;
    std::vector<std::uint64_t> members;

    std::size_t size() const { return members.size(); }
};

// Smallest-prime-factor and Euler-totient tables up to n_max, built with a
// linear sieve. Immutable after construction.
class SieveTables {
public:
    SieveTables(std::uint64_t n_max, std::uint64_t max_entries = kDefaultBudget);

    std::uint64_t n_max() const { return n_max_; }
    std::uint32_t spf(std::uint64_t n) const;
    std::uint64_t phi(std::uint64_t n) const;

    // Divisors of n in ascending order, via SPF factorization.
    std::vector<std::uint64_t> divisors(std::uint64_t n) const;

    static constexpr std::uint64_t kDefaultBudget = 200'000'000;

private:
    std::uint64_t n_max_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> phi_;
};

inline SieveTables build_sieve(std::uint64_t n_max, std::uint64_t max_entries = SieveTables::kDefaultBudget) {
    return SieveTables(n_max, max_entries);
}

// Euler totient without tables (SPF-free trial-division factorization).
std::uint64_t phi_direct(std::uint64_t n);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Smallest prime strictly greater than n.
std::uint64_t next_prime_above(std::uint64_t n);

// The partial-reduction threshold predicate: d <= max(1, (ln n)^{eps/2}).
// For d >= 2 the comparison is evaluated as (2/eps)*ln d <= ln ln n in
// extended precision; ties count as inside (<=).
bool gcd_within_threshold(std::uint64_t d, std::uint64_t n, const Rat& eps);

// T(n) = max(1, (ln n)^{eps/2}) as a long double, for reports and bounds.
long double reduction_threshold(std::uint64_t n, const Rat& eps);

// True iff gcd(a, n) passes the threshold for this n. 1 <= a <= n required.
bool s_membership(std::uint64_t a, std::uint64_t n, const Rat& eps);

// S_n: all a in [1, n] with gcd(a, n) <= T(n).
NumeratorSet s_set(std::uint64_t n, const Rat& eps);

// |S_n ∩ nJ|: members a with a/n (reduced mod 1) inside the arc J, under J's
// endpoint semantics.
std::uint64_t s_count_in_arc(std::uint64_t n, const Rat& eps, const Arc& j);

// Number of a in [1, n] whose gcd with n is a divisor d <= threshold,
// computed as sum over divisors of phi(n/d). Generic real threshold.
std::uint64_t phi_divisor_sum(std::uint64_t n, long double threshold, const SieveTables* tables = nullptr);

// Same divisor sum but gated by the exact predicate s_membership uses, so
// the two counting routes are comparable without float drift.
std::uint64_t phi_divisor_sum_at(std::uint64_t n, const Rat& eps, const SieveTables* tables = nullptr);

// S_n split by gcd value: key d (every divisor of n passing the threshold),
// value {d*b : b in [n/d], gcd(b, n/d) = 1}. Disjoint union equals s_set.
std::map<std::uint64_t, std::vector<std::uint64_t>> s_decompose(std::uint64_t n, const Rat& eps);

}  // namespace randapprox
