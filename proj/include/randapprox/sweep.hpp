#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "randapprox/rational.hpp"

namespace randapprox {

// Exact piecewise-constant integration over the circle.
//
// A family of open intervals contributes open/close events with a positive
// weight; the sweep maintains V(x) = sum of weights of intervals covering x
// and returns, for each arc J_i = [i/M, (i+1)/M) of the M-partition, the
// exact rationals
//     ∫_{J_i} V dx,   ∫_{J_i} V^2 dx,   ∫_{J_i} 1_{V>0} dx.
// With unit weights V is the coverage depth, so ∫V = Σ_n λ(E_n ∩ J) and
// ∫V² = Σ_{m,n} λ(E_m ∩ E_n ∩ J) in one pass — no pairwise intersections.
//
// Positions are exact rationals pos_num / (den_n * 2^64). The integrals are
// assembled by summation by parts: each event value enters with an integer
// coefficient, accumulated per denominator, so no rational arithmetic runs
// inside the sweep loop.
struct SweepEvent {
    u128 pos_num;
    std::uint32_t den_n;
    i128 delta;  // weight units added at this position; 0 is reserved
};

struct DepthIntegrals {
    std::vector<Rat> linear;     // ∫ V, weight units scaled out
    std::vector<Rat> quadratic;  // ∫ V^2
    std::vector<Rat> covered;    // ∫ 1_{V > 0}
};

// weight_shift: weights are units of 2^-weight_shift (0 for unit weights,
// 64 for probability thresholds). Events are sorted in place.
DepthIntegrals sweep_depth(std::vector<SweepEvent>& events, std::uint32_t partition_m, unsigned weight_shift);

// Open/close events for the intervals ((a - psi)/n, (a + psi)/n), a in
// `members`; the a = n interval wraps and splits at 0.
void append_interval_events(std::vector<SweepEvent>& events, std::uint64_t n,
                            std::span<const std::uint64_t> members, std::uint64_t psi_units, i128 weight);

}  // namespace randapprox
