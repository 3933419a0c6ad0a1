#pragma once

#include <cstdint>
#include <vector>

#include "randapprox/numtheory.hpp"
#include "randapprox/rational.hpp"
#include "randapprox/sequences.hpp"

namespace randapprox {

// Version tag for the mixing function below. Frozen: any change to the
// constants or structure must bump this string, since run manifests and
// frozen experiment outputs depend on it bit for bit.
inline constexpr const char* kPrfVersion = "rx-prf-1";

// 64-bit finalizer (Stafford mix13, the SplitMix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based PRF over (seed, n, a): membership of any single pair is
// computable in O(1) without materializing earlier sets. The two stream
// constants keep the n- and a-lanes decorrelated.
inline std::uint64_t prf64(std::uint64_t seed, std::uint64_t n, std::uint64_t a) {
    const std::uint64_t lane_n = 0x9E3779B97F4A7C15ULL;  // 2^64 / golden ratio
    const std::uint64_t lane_a = 0xC2B2AE3D27D4EB4FULL;
    return mix64(mix64(seed ^ (lane_n * n)) ^ (lane_a * a));
}

// Seed for an indexed Monte Carlo trial, derived through the same PRF.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
    const std::uint64_t kTrialTag = 0x545249414CULL;  // "TRIAL"
    return prf64(base_seed, trial_index, kTrialTag);
}

// Unbiased uniform draw from [0, m) keyed by (seed, tag), by rejection.
std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t tag, std::uint64_t m);

// Deterministic lazy realization of the random numerator sets P_n: each pair
// (n, a) is included iff prf64(seed, n, a) falls below the per-n threshold
// floor(p_n * 2^64). Immutable after construction; all queries are pure.
class MembershipOracle {
public:
    MembershipOracle(std::uint64_t seed, ProbSpec p, Rat eps, std::uint64_t n_max);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t n_max() const { return thresholds_.size() - 1; }
    const ProbSpec& prob_spec() const { return prob_; }
    const Rat& eps() const { return eps_; }

    const SelectionThreshold& threshold(std::uint64_t n) const;

    // True iff a is selected into P_n. 1 <= a <= n required.
    bool member(std::uint64_t n, std::uint64_t a) const;

    // P_n materialized: all selected a in [1, n].
    NumeratorSet sample_p(std::uint64_t n) const;

    // Q_n = P_n intersected with S_n (the partially reduced numerators).
    NumeratorSet sample_q(std::uint64_t n) const;

    // Q_n materialized from a precomputed S_n (avoids the gcd rescan).
    NumeratorSet sample_q_from(const NumeratorSet& s) const;

private:
    std::uint64_t seed_;
    ProbSpec prob_;
    Rat eps_;
    std::vector<SelectionThreshold> thresholds_;
};

}  // namespace randapprox
