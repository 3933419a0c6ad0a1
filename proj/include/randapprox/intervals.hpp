#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randapprox/rational.hpp"

namespace randapprox {

// An arc on the circle R/Z. lo is reduced into [0,1); hi may run past 1 for a
// wrapping arc, with 0 < hi - lo <= 1. Partition arcs J_i are half-open
// [lo, hi) so that they tile the circle exactly; approximation intervals are
// open (lo, hi). The flag only affects point membership; lengths agree.
struct Arc {
    Rat lo;
    Rat hi;
    bool half_open = false;

    Rat length() const { return hi - lo; }

    static Arc open(Rat lo, Rat hi) { return make(std::move(lo), std::move(hi), false); }
    static Arc half(Rat lo, Rat hi) { return make(std::move(lo), std::move(hi), true); }
    static Arc make(Rat lo, Rat hi, bool half_open);

    // True iff x (reduced mod 1) lies in the arc under its endpoint semantics.
    bool contains_point(const Rat& x) const;
};

// Canonical finite union of open arcs on the circle: arcs are non-wrapping
// (0 <= lo < hi <= 1), sorted by lo, pairwise disjoint (touching endpoints
// allowed, overlaps merged), each of positive length. The exact measure is
// cached at construction.
class IntervalUnion {
public:
    IntervalUnion() = default;

    const std::vector<std::pair<Rat, Rat>>& arcs() const { return arcs_; }
    const Rat& measure() const { return measure_; }
    bool empty() const { return arcs_.empty(); }
    std::size_t size() const { return arcs_.size(); }

    // Internal: adopts an already-canonical arc list. Callers outside the
    // module should go through normalize().
    static IntervalUnion from_canonical(std::vector<std::pair<Rat, Rat>> arcs);

private:
    std::vector<std::pair<Rat, Rat>> arcs_;
    Rat measure_ = 0;
};

// Canonicalizes a raw arc list: wrapping arcs are split at 0, overlapping
// arcs merged. The union as a point set is preserved except for the
// measure-zero split points at 0.
IntervalUnion normalize(const std::vector<Arc>& raw);

inline const Rat& measure(const IntervalUnion& u) { return u.measure(); }

// Exact point-set intersection of two canonical unions.
IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v);

// Intersection with a single (possibly wrapping) arc J.
IntervalUnion clip(const IntervalUnion& u, const Arc& j);

// Strict membership: x reduced mod 1, open-endpoint semantics.
bool contains(const IntervalUnion& u, const Rat& x);

// All endpoints shifted by r mod 1 (measure-preserving).
IntervalUnion rotated(const IntervalUnion& u, const Rat& r);

// JSON array of [lo_num, lo_den, hi_num, hi_den] quadruples in canonical
// order, every component a decimal string.
std::string to_json_array(const IntervalUnion& u);

}  // namespace randapprox
