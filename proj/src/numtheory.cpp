#include "randapprox/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace randapprox {

SieveTables::SieveTables(std::uint64_t n_max, std::uint64_t max_entries) : n_max_(n_max) {
    if (n_max < 2) throw InputError("sieve bound must be at least 2");
    if (n_max + 1 > max_entries)
        throw ResourceError("sieve bound " + std::to_string(n_max) + " exceeds memory budget of " +
                            std::to_string(max_entries) + " entries");
    spf_.assign(n_max + 1, 0);
    phi_.assign(n_max + 1, 0);
    spf_[1] = 1;
    phi_[1] = 1;
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= n_max; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            phi_[i] = static_cast<std::uint32_t>(i - 1);
            primes.push_back(static_cast<std::uint32_t>(i));
        }
        for (std::uint32_t p : primes) {
            if (p > spf_[i] || i * p > n_max) break;
            spf_[i * p] = p;
            phi_[i * p] = (p == spf_[i]) ? phi_[i] * p : phi_[i] * (p - 1);
        }
    }
}

std::uint32_t SieveTables::spf(std::uint64_t n) const {
    if (n < 1 || n > n_max_) throw InputError("spf query outside sieve range");
    return spf_[n];
}

std::uint64_t SieveTables::phi(std::uint64_t n) const {
    if (n < 1 || n > n_max_) throw InputError("phi query outside sieve range");
    return phi_[n];
}

std::vector<std::uint64_t> SieveTables::divisors(std::uint64_t n) const {
    if (n < 1 || n > n_max_) throw InputError("divisor query outside sieve range");
    std::vector<std::uint64_t> divs{1};
    std::uint64_t m = n;
    while (m > 1) {
        const std::uint64_t p = spf_[m];
        std::uint64_t exp = 0;
        while (m % p == 0) {
            m /= p;
            ++exp;
        }
        const std::size_t base = divs.size();
        std::uint64_t pk = 1;
        for (std::uint64_t e = 1; e <= exp; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::uint64_t phi_direct(std::uint64_t n) {
    if (n == 0) throw InputError("phi(0) undefined");
    std::uint64_t result = n;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto mulmod = [&](u128 a, u128 b) { return static_cast<std::uint64_t>(a * b % n); };
    auto powmod = [&](std::uint64_t base, std::uint64_t exp) {
        std::uint64_t acc = 1;
        base %= n;
        while (exp) {
            if (exp & 1) acc = mulmod(acc, base);
            base = mulmod(base, base);
            exp >>= 1;
        }
        return acc;
    };
    // this base set decides primality for every 64-bit integer
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::uint64_t next_prime_above(std::uint64_t n) {
    std::uint64_t candidate = n + 1;
    if (candidate <= 2) return 2;
    if ((candidate & 1) == 0) ++candidate;
    while (!is_prime_u64(candidate)) candidate += 2;
    return candidate;
}

bool gcd_within_threshold(std::uint64_t d, std::uint64_t n, const Rat& eps) {
    if (d <= 1) return true;  // T(n) >= 1 by the max(1, .) floor
    if (n < 2) return false;
    const long double two_over_eps =
        2.0L * rat_den(eps).convert_to<long double>() / rat_num(eps).convert_to<long double>();
    return two_over_eps * std::log(static_cast<long double>(d)) <=
           std::log(std::log(static_cast<long double>(n)));
}

long double reduction_threshold(std::uint64_t n, const Rat& eps) {
    if (n < 2) return 1.0L;
    const long double half_eps = rat_to_long_double(eps) / 2.0L;
    return std::max(1.0L, std::pow(std::log(static_cast<long double>(n)), half_eps));
}

bool s_membership(std::uint64_t a, std::uint64_t n, const Rat& eps) {
    if (a < 1 || a > n) throw InputError("numerator outside [1, n]");
    return gcd_within_threshold(std::gcd(a, n), n, eps);
}

NumeratorSet s_set(std::uint64_t n, const Rat& eps) {
    if (n < 1) throw InputError("n must be positive");
    NumeratorSet s;
    s.n = n;
    s.kind = SetKind::S;
    // divisors of n passing the threshold, as a sorted lookup: gcd(a,n) is
    // always a divisor, so one predicate call per divisor suffices
    std::vector<std::uint64_t> good;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        if (gcd_within_threshold(d, n, eps)) good.push_back(d);
        const std::uint64_t e = n / d;
        if (e != d && gcd_within_threshold(e, n, eps)) good.push_back(e);
    }
    std::sort(good.begin(), good.end());
    for (std::uint64_t a = 1; a <= n; ++a) {
        if (std::binary_search(good.begin(), good.end(), std::gcd(a, n))) s.members.push_back(a);
    }
    return s;
}

namespace {

// Integer ranges of residues a' in [0, n-1] with a'/n inside the arc.
struct ResidueRanges {
    std::uint64_t lo1 = 1, hi1 = 0;  // empty when lo > hi
    std::uint64_t lo2 = 1, hi2 = 0;

    bool contains(std::uint64_t r) const {
        return (r >= lo1 && r <= hi1) || (r >= lo2 && r <= hi2);
    }
};

// a'/n ∈ [lo, hi) (half-open) or (lo, hi) (open), as inclusive integer
// bounds on a' = a mod n.
ResidueRanges residue_ranges(std::uint64_t n, const Arc& j) {
    auto bound_lo = [&](const Rat& lo) -> Int {
        Rat scaled = lo * Rat(n);
        Int f = rat_floor(scaled);
        if (j.half_open) return (Rat(f) == scaled) ? f : f + 1;  // a' >= lo*n
        return f + 1;                                            // a' > lo*n
    };
    auto bound_hi = [&](const Rat& hi) -> Int {
        Rat scaled = hi * Rat(n);
        Int f = rat_floor(scaled);
        return (Rat(f) == scaled) ? f - 1 : f;  // a' < hi*n (both semantics)
    };
    ResidueRanges out;
    auto assign = [&](const Rat& lo, const Rat& hi, bool second) {
        Int mn = bound_lo(lo);
        Int mx = bound_hi(hi);
        if (mn < 0) mn = 0;
        if (mx > Int(n - 1)) mx = Int(n - 1);
        if (mn > mx) return;
        if (!second) {
            out.lo1 = mn.convert_to<std::uint64_t>();
            out.hi1 = mx.convert_to<std::uint64_t>();
        } else {
            out.lo2 = mn.convert_to<std::uint64_t>();
            out.hi2 = mx.convert_to<std::uint64_t>();
        }
    };
    if (j.hi > 1) {
        assign(j.lo, Rat(1), false);
        // wrapped tail [0, hi-1): residue 0 is covered under both endpoint
        // semantics (the seam 0 == 1 is interior to a wrapping arc)
        Int mx = bound_hi(j.hi - 1);
        if (mx > Int(n - 1)) mx = Int(n - 1);
        if (mx >= 0) {
            out.lo2 = 0;
            out.hi2 = mx.convert_to<std::uint64_t>();
        }
    } else {
        assign(j.lo, j.hi, false);
    }
    return out;
}

}  // namespace

std::uint64_t s_count_in_arc(std::uint64_t n, const Rat& eps, const Arc& j) {
    if (n < 1) throw InputError("n must be positive");
    std::vector<std::uint64_t> good;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        if (gcd_within_threshold(d, n, eps)) good.push_back(d);
        const std::uint64_t e = n / d;
        if (e != d && gcd_within_threshold(e, n, eps)) good.push_back(e);
    }
    std::sort(good.begin(), good.end());
    const ResidueRanges ranges = residue_ranges(n, j);
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= n; ++a) {
        if (!ranges.contains(a % n)) continue;
        if (std::binary_search(good.begin(), good.end(), std::gcd(a, n))) ++count;
    }
    return count;
}

std::uint64_t phi_divisor_sum(std::uint64_t n, long double threshold, const SieveTables* tables) {
    if (n < 1) throw InputError("n must be positive");
    if (threshold < 1.0L) return 0;
    std::uint64_t total = 0;
    auto phi_of = [&](std::uint64_t m) { return tables ? tables->phi(m) : phi_direct(m); };
    if (tables && n <= tables->n_max()) {
        for (std::uint64_t d : tables->divisors(n))
            if (static_cast<long double>(d) <= threshold) total += phi_of(n / d);
        return total;
    }
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        if (static_cast<long double>(d) <= threshold) total += phi_direct(n / d);
        const std::uint64_t e = n / d;
        if (e != d && static_cast<long double>(e) <= threshold) total += phi_direct(n / e);
    }
    return total;
}

std::uint64_t phi_divisor_sum_at(std::uint64_t n, const Rat& eps, const SieveTables* tables) {
    if (n < 1) throw InputError("n must be positive");
    std::uint64_t total = 0;
    auto phi_of = [&](std::uint64_t m) { return (tables && m <= tables->n_max()) ? tables->phi(m) : phi_direct(m); };
    if (tables && n <= tables->n_max()) {
        for (std::uint64_t d : tables->divisors(n))
            if (gcd_within_threshold(d, n, eps)) total += phi_of(n / d);
        return total;
    }
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        if (gcd_within_threshold(d, n, eps)) total += phi_direct(n / d);
        const std::uint64_t e = n / d;
        if (e != d && gcd_within_threshold(e, n, eps)) total += phi_direct(n / e);
    }
    return total;
}

std::map<std::uint64_t, std::vector<std::uint64_t>> s_decompose(std::uint64_t n, const Rat& eps) {
    if (n < 2) throw InputError("decomposition needs n >= 2");
    std::map<std::uint64_t, std::vector<std::uint64_t>> out;
    for (std::uint64_t d = 1; d <= n; ++d) {
        if (n % d != 0 || !gcd_within_threshold(d, n, eps)) continue;
        auto& bucket = out[d];
        const std::uint64_t q = n / d;
        for (std::uint64_t b = 1; b <= q; ++b)
            if (std::gcd(b, q) == 1) bucket.push_back(d * b);
    }
    return out;
}

}  // namespace randapprox
