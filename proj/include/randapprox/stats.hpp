#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "randapprox/approxsets.hpp"
#include "randapprox/intervals.hpp"
#include "randapprox/rational.hpp"
#include "randapprox/sequences.hpp"

namespace randapprox {

// Worker-thread count used by the parallel loops (0 = hardware). All
// parallel reductions are over exact integers or run in a fixed order, so
// results are identical for every thread count.
void set_worker_threads(unsigned threads);
unsigned worker_threads();
void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, unsigned)>& body);

// (Sum_n measures)^2 / Sum_{m,n} overlaps, exact. overlaps must be symmetric
// with diagonal equal to measures. nullopt when everything is zero (the
// ratio is undefined); a zero denominator with nonzero numerator cannot
// happen because the diagonal dominates.
std::optional<Rat> qia_ratio(const std::vector<Rat>& measures, const std::vector<std::vector<Rat>>& overlaps,
                             std::size_t n);

struct McEstimate {
    std::uint64_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double std_error = 0.0;
};

// Mean/variance of a pure statistic over deterministically derived trial
// seeds. Reductions use a fixed pairwise order, so the result is bit-stable.
McEstimate mc_estimate(const std::function<double(std::uint64_t)>& statistic, std::uint64_t trials,
                       std::uint64_t base_seed);

struct LemmaSRow {
    std::uint64_t n = 0;
    std::uint64_t count = 0;  // |S_n ∩ nJ|
    Rat ratio;                // count / (lambda(J) * eps * n)
};

struct LemmaSReport {
    Rat min_ratio;
    std::uint64_t argmin_n = 0;
    std::uint64_t first_positive_n = 0;  // empirical onset; 0 if never
    std::vector<LemmaSRow> rows;         // filled when with_table
};

// r(n) = |S_n ∩ nJ| / (lambda(J) eps n) over n in [n_lo, n_hi].
LemmaSReport verify_lemma_s(std::uint64_t n_lo, std::uint64_t n_hi, const Rat& eps, const Arc& j,
                            bool with_table = false);

struct OverlapBoundRow {
    std::uint64_t n_cap = 0;
    Rat lhs;         // Sum_{m!=n} p_m p_n l(E_m^S ∩ E_n^S) + Sum_n p_n l(E_n^S)
    Rat rhs_core;    // (Sum p_n psi(n))^2
    Rat rhs_linear;  // Sum p_n psi(n)
    Rat ratio;       // lhs / (core + linear)
};

struct OverlapBoundReport {
    std::vector<OverlapBoundRow> rows;
    Rat max_ratio;      // smallest C with lhs <= C (core + linear) on the grid
    double log_slope = 0.0;  // OLS slope of ratio against ln N
};

// Exact expected overlap sums against (Sum p psi)^2 across a grid of N.
// Probabilities enter through their dyadic thresholds — exactly the values
// the membership oracle realizes.
OverlapBoundReport verify_overlap_bound(const std::vector<std::uint64_t>& n_grid, const PsiSpec& psi,
                                        const ProbSpec& p, const Rat& eps);

enum class VerifyStatus { Ok, Warning };

struct VarSubaddReport {
    Rat lhs_var;       // Var of Sum_{m,n<=N} l(E_m^Q ∩ E_n^Q ∩ J)
    Rat rhs_sum_var;   // Sum of per-(m,n) variances
    double ratio = 0.0;
    std::uint64_t trials = 0;
    VerifyStatus status = VerifyStatus::Ok;
};

// Monte Carlo check of variance subadditivity on the extended space (P and
// the partition arc J drawn jointly per trial). Exact integer accumulators;
// byte-stable at fixed seed.
VarSubaddReport verify_var_subadditivity(const PsiSpec& psi, const ProbSpec& p, const Rat& eps,
                                         std::uint64_t n_cap, std::uint32_t partition_m, std::uint64_t trials,
                                         std::uint64_t seed);

struct VartwoRow {
    std::uint64_t m = 0, n = 0;
    Rat variance;  // Var l(E_m^Q ∩ E_n^Q ∩ J)
    Rat base;      // p_m p_n psi(m) psi(n) + E[l(E_m^Q ∩ E_n^Q)]
    double c = 0.0;
};

struct VartwoReport {
    std::vector<VartwoRow> rows;
    double max_c = 0.0;
};

// Per-pair variance against the additive bound, over all m < n <= n_hi.
VartwoReport verify_vartwo_bound(const PsiSpec& psi, const ProbSpec& p, const Rat& eps, std::uint64_t n_hi,
                                 std::uint32_t partition_m, std::uint64_t trials, std::uint64_t seed);

struct PairOverlapMcRow {
    std::uint64_t m = 0, n = 0;
    Rat mean;      // Monte Carlo mean of l(E_m^Q ∩ E_n^Q), exact
    Rat variance;  // unbiased sample variance, exact
};

// Per-pair Monte Carlo moments of l(E_m^Q ∩ E_n^Q) over the full circle,
// for all m < n <= n_hi, one joint sample of P per trial. Exact rationals.
std::vector<PairOverlapMcRow> mc_pair_overlaps(const PsiSpec& psi, const ProbSpec& p, const Rat& eps,
                                               std::uint64_t n_hi, std::uint64_t trials, std::uint64_t seed);

}  // namespace randapprox
