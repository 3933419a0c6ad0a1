#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "randapprox/intervals.hpp"
#include "randapprox/numtheory.hpp"
#include "randapprox/sequences.hpp"

namespace randapprox {

// The union of open arcs ((a - psi)/n, (a + psi)/n) over a numerator set A.
// With psi <= 1/2 the constituent arcs are pairwise disjoint, so the measure
// equals |A| * 2 psi / n; that identity is checked by tests, not assumed here
// (the measure below is an honest sum of arc lengths).
struct ApproxSet {
    std::uint64_t n = 0;
    SetKind kind = SetKind::Explicit;
    Dyadic64 psi;
    std::uint64_t count = 0;  // |A|
    IntervalUnion arcs;
};

ApproxSet build_e(const NumeratorSet& a, Dyadic64 psi_n);

// Exact lambda(E1 ∩ E2 [∩ J]).
Rat overlap(const ApproxSet& e1, const ApproxSet& e2, const std::optional<Arc>& j = std::nullopt);

// Closed-form E[lambda(E_n^Q ∩ J)] = p_n * lambda(E_n^S ∩ J): the arcs of
// E_n^S are disjoint and selected independently with probability p_n.
Rat expected_measure_q(std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const Rat& eps, const Arc& j);

// Closed-form E[lambda(E_m^Q ∩ E_n^Q)]: p_m p_n lambda(E_m^S ∩ E_n^S) off
// the diagonal, p_n lambda(E_n^S) on it.
Rat expected_overlap_q(std::uint64_t m, std::uint64_t n, const PsiSpec& psi, const ProbSpec& p, const Rat& eps);

// Per-interval intersection profile used by the variance bound: q_k counts
// the arcs of E_n meeting the k-th arc of E_m.
struct QkProfile {
    std::vector<std::uint64_t> counts;      // one entry per arc of E_m, in center order
    std::uint64_t max_count = 0;
    Rat bound;                              // (2 psi(m)/m) n + 3
    bool bound_ok = true;                   // every q_k within the bound
    bool single_intersection = true;        // no arc of E_n meets two arcs of E_m
};

// Profile for explicit numerator sets (psi values in (0, 1/4], m < n).
QkProfile qk_profile_sets(const NumeratorSet& am, Dyadic64 psi_m, const NumeratorSet& an, Dyadic64 psi_n);

// Profile for the partially reduced sets S_m, S_n.
QkProfile qk_profile(std::uint64_t m, std::uint64_t n, const PsiSpec& psi, const Rat& eps);

}  // namespace randapprox
