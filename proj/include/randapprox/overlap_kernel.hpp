#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "randapprox/rational.hpp"

namespace randapprox::kernel {

// Exact fixed-denominator interval arithmetic for the hot Monte Carlo loops.
// Positions live on the integer circle [0, L * 2^64) where L is a per-pair
// common multiple; every endpoint (a +- psi(n))/n maps to the exact integer
// (a * 2^64 +- psi_units) * (L / n). All lengths are returned in the same
// units, so per-trial statistics accumulate as exact integers.

// One selected family of approximation intervals in scaled coordinates:
// sorted non-wrapping segments. `mult` must equal L / n.
void scale_segments(std::span<const std::uint64_t> members, std::uint64_t n, std::uint64_t psi_units,
                    u128 mult, std::vector<std::pair<u128, u128>>& out);

// Total length of the pairwise intersection of two scaled segment lists,
// optionally clipped to the window [clip_lo, clip_hi).
u128 intersection_units(std::span<const std::pair<u128, u128>> a, std::span<const std::pair<u128, u128>> b);
u128 intersection_units_clipped(std::span<const std::pair<u128, u128>> a,
                                std::span<const std::pair<u128, u128>> b, u128 clip_lo, u128 clip_hi);

// Total length of one scaled segment list clipped to a window.
u128 length_units_clipped(std::span<const std::pair<u128, u128>> a, u128 clip_lo, u128 clip_hi);

}  // namespace randapprox::kernel
