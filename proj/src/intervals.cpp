#include "randapprox/intervals.hpp"

#include <algorithm>

namespace randapprox {

Arc Arc::make(Rat lo, Rat hi, bool half_open) {
    Rat len = hi - lo;
    if (len <= 0 || len > 1) throw InputError("arc length must lie in (0, 1]");
    Rat rlo = rat_mod1(lo);
    Arc a;
    a.lo = rlo;
    a.hi = rlo + len;
    a.half_open = half_open;
    return a;
}

bool Arc::contains_point(const Rat& x) const {
    Rat p = rat_mod1(x);
    if (hi <= 1) return half_open ? (p >= lo && p < hi) : (p > lo && p < hi);
    // wrapping arc: covers [lo,1) and [0,hi-1); the seam point 0 == 1 is
    // interior, so only the lo endpoint is affected by openness
    return half_open ? (p >= lo || p < hi - 1) : (p > lo || p < hi - 1);
}

IntervalUnion IntervalUnion::from_canonical(std::vector<std::pair<Rat, Rat>> arcs) {
    IntervalUnion u;
    u.arcs_ = std::move(arcs);
    Rat m = 0;
    for (const auto& [lo, hi] : u.arcs_) m += hi - lo;
    u.measure_ = m;
    return u;
}

IntervalUnion normalize(const std::vector<Arc>& raw) {
    std::vector<std::pair<Rat, Rat>> pieces;
    pieces.reserve(raw.size() + 4);
    for (const Arc& a : raw) {
        Rat len = a.hi - a.lo;
        if (len <= 0 || len > 1) throw InputError("arc length must lie in (0, 1]");
        if (a.hi > 1) {
            pieces.emplace_back(a.lo, Rat(1));
            if (a.hi - 1 > 0) pieces.emplace_back(Rat(0), a.hi - 1);
        } else {
            pieces.emplace_back(a.lo, a.hi);
        }
    }
    std::sort(pieces.begin(), pieces.end());
    std::vector<std::pair<Rat, Rat>> merged;
    for (auto& piece : pieces) {
        // merge only true overlaps; arcs touching at an endpoint stay
        // separate so the open point set is preserved
        if (!merged.empty() && piece.first < merged.back().second) {
            if (piece.second > merged.back().second) merged.back().second = piece.second;
        } else {
            merged.push_back(std::move(piece));
        }
    }
    return IntervalUnion::from_canonical(std::move(merged));
}

IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v) {
    std::vector<std::pair<Rat, Rat>> out;
    std::size_t i = 0, j = 0;
    const auto& a = u.arcs();
    const auto& b = v.arcs();
    while (i < a.size() && j < b.size()) {
        const Rat& lo = std::max(a[i].first, b[j].first);
        const Rat& hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return IntervalUnion::from_canonical(std::move(out));
}

IntervalUnion clip(const IntervalUnion& u, const Arc& j) {
    std::vector<std::pair<Rat, Rat>> jarcs;
    if (j.hi > 1) {
        jarcs.emplace_back(j.lo, Rat(1));
        if (j.hi - 1 > 0) jarcs.emplace_back(Rat(0), j.hi - 1);
        std::sort(jarcs.begin(), jarcs.end());
    } else {
        jarcs.emplace_back(j.lo, j.hi);
    }
    return intersect(u, IntervalUnion::from_canonical(std::move(jarcs)));
}

bool contains(const IntervalUnion& u, const Rat& x) {
    Rat p = rat_mod1(x);
    const auto& a = u.arcs();
    auto it = std::upper_bound(a.begin(), a.end(), p,
                               [](const Rat& v, const std::pair<Rat, Rat>& arc) { return v < arc.first; });
    if (it == a.begin()) return false;
    --it;
    return p > it->first && p < it->second;
}

IntervalUnion rotated(const IntervalUnion& u, const Rat& r) {
    std::vector<Arc> shifted;
    shifted.reserve(u.size());
    for (const auto& [lo, hi] : u.arcs()) shifted.push_back(Arc::open(lo + r, lo + r + (hi - lo)));
    return normalize(shifted);
}

std::string to_json_array(const IntervalUnion& u) {
    std::string out = "[";
    bool first = true;
    for (const auto& [lo, hi] : u.arcs()) {
        if (!first) out += ",";
        first = false;
        out += "[\"" + rat_num(lo).str() + "\",\"" + rat_den(lo).str() + "\",\"" +
               rat_num(hi).str() + "\",\"" + rat_den(hi).str() + "\"]";
    }
    out += "]";
    return out;
}

}  // namespace randapprox
