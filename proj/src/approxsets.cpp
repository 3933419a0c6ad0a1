#include "randapprox/approxsets.hpp"

#include <algorithm>
#include <numeric>

namespace randapprox {

ApproxSet build_e(const NumeratorSet& a, Dyadic64 psi_n) {
    if (a.n < 1) throw InputError("approximation set needs n >= 1");
    if (psi_n.units > (std::uint64_t{1} << 63)) throw InputError("psi value outside [0, 1/2]");
    ApproxSet e;
    e.n = a.n;
    e.kind = a.kind;
    e.psi = psi_n;
    e.count = a.members.size();
    if (psi_n.units == 0 || a.members.empty()) return e;

    const Int den = Int(a.n) << 64;
    const Int half(psi_n.units);
    std::vector<Arc> raw;
    raw.reserve(a.members.size());
    for (std::uint64_t m : a.members) {
        if (m < 1 || m > a.n) throw InputError("numerator outside [1, n]");
        const Int center = Int(m) << 64;
        raw.push_back(Arc::open(Rat(center - half, den), Rat(center + half, den)));
    }
    e.arcs = normalize(raw);
    return e;
}

Rat overlap(const ApproxSet& e1, const ApproxSet& e2, const std::optional<Arc>& j) {
    IntervalUnion isect = intersect(e1.arcs, e2.arcs);
    if (j) isect = clip(isect, *j);
    return isect.measure();
}

Rat expected_measure_q(std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const Rat& eps, const Arc& j) {
    if (n < 1) throw InputError("n must be positive");
    const ApproxSet es = build_e(s_set(n, eps), eval_psi(psi, n));
    return eval_p(p, n).value * clip(es.arcs, j).measure();
}

Rat expected_overlap_q(std::uint64_t m, std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const Rat& eps) {
    if (m < 1 || n < 1) throw InputError("m, n must be positive");
    if (m == n) {
        const ApproxSet es = build_e(s_set(n, eps), eval_psi(psi, n));
        return eval_p(p, n).value * es.arcs.measure();
    }
    const ApproxSet em = build_e(s_set(m, eps), eval_psi(psi, m));
    const ApproxSet en = build_e(s_set(n, eps), eval_psi(psi, n));
    return eval_p(p, m).value * eval_p(p, n).value * intersect(em.arcs, en.arcs).measure();
}

namespace {

struct Piece {
    u128 lo;
    u128 hi;
    std::uint32_t idx;  // logical arc index within its family
};

// Non-wrapping pieces sorted by lo; the a = n arc splits into a front and a
// back piece sharing the same logical index. Returns the wrapping index, or
// UINT32_MAX when nothing wraps.
std::uint32_t build_pieces(const NumeratorSet& a, Dyadic64 psi, u128 mult, std::vector<Piece>& out) {
    out.clear();
    const u128 circle = (u128{a.n} << 64) * mult;
    std::uint32_t wrap_idx = UINT32_MAX;
    Piece front{};
    bool has_front = false;
    for (std::uint32_t k = 0; k < a.members.size(); ++k) {
        const u128 center = (u128{a.members[k]} << 64) * mult;
        const u128 half = u128{psi.units} * mult;
        const u128 lo = center - half;
        const u128 hi = center + half;
        if (hi > circle) {
            wrap_idx = k;
            if (lo < circle) out.push_back({lo, circle, k});
            if (hi - circle > 0) {
                front = {u128{0}, hi - circle, k};
                has_front = true;
            }
        } else {
            out.push_back({lo, hi, k});
        }
    }
    if (has_front) out.insert(out.begin(), front);
    return wrap_idx;
}

}  // namespace

QkProfile qk_profile_sets(const NumeratorSet& am, Dyadic64 psi_m, const NumeratorSet& an, Dyadic64 psi_n) {
    if (am.n >= an.n) throw InputError("qk profile needs m < n");
    auto check_quarter = [](Dyadic64 v, bool allow_zero) {
        if (v.units > (std::uint64_t{1} << 62)) throw InputError("qk profile needs psi <= 1/4");
        if (v.units == 0 && !allow_zero) throw InputError("qk profile needs psi > 0");
    };
    check_quarter(psi_m, am.members.empty());
    check_quarter(psi_n, an.members.empty());

    const std::uint64_t m = am.n;
    const std::uint64_t n = an.n;
    const std::uint64_t g = std::gcd(m, n);
    std::vector<Piece> pm, pn;
    const std::uint32_t wrap_m = build_pieces(am, psi_m, u128{n / g}, pm);
    const std::uint32_t wrap_n = build_pieces(an, psi_n, u128{m / g}, pn);

    QkProfile profile;
    profile.counts.assign(am.members.size(), 0);
    profile.bound = Rat(Int(2) * Int(psi_m.units) * Int(n), Int(m) << 64) + 3;

    // Two-pointer sweep over overlapping piece pairs. Only the wrap-wrap
    // logical pair can surface twice (once per side of the seam); every
    // other logical pair meets in at most one piece pair when psi <= 1/4.
    std::vector<std::uint32_t> met(an.members.size(), 0);
    bool wrap_pair_counted = false;
    std::size_t i = 0, j = 0;
    while (i < pm.size() && j < pn.size()) {
        if (std::max(pm[i].lo, pn[j].lo) < std::min(pm[i].hi, pn[j].hi)) {
            const bool is_wrap_pair = pm[i].idx == wrap_m && pn[j].idx == wrap_n && wrap_m != UINT32_MAX;
            if (!is_wrap_pair || !wrap_pair_counted) {
                ++profile.counts[pm[i].idx];
                ++met[pn[j].idx];
            }
            if (is_wrap_pair) wrap_pair_counted = true;
        }
        if (pm[i].hi < pn[j].hi)
            ++i;
        else
            ++j;
    }
    for (std::uint32_t c : met)
        if (c > 1) profile.single_intersection = false;
    for (std::uint64_t c : profile.counts) {
        profile.max_count = std::max(profile.max_count, c);
        if (Rat(Int(c)) > profile.bound) profile.bound_ok = false;
    }
    return profile;
}

QkProfile qk_profile(std::uint64_t m, std::uint64_t n, const PsiSpec& psi, const Rat& eps) {
    if (m >= n) throw InputError("qk profile needs m < n");
    return qk_profile_sets(s_set(m, eps), eval_psi(psi, m), s_set(n, eps), eval_psi(psi, n));
}

}  // namespace randapprox
