#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "randapprox/randmodel.hpp"
#include "randapprox/rational.hpp"
#include "randapprox/sequences.hpp"

namespace randapprox {

// One finite-truncation experiment: which window of n to scan, how fine a
// grid, how the circle is partitioned, and where exact materialization must
// stop. All randomness flows from the seed through the PRF.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    Rat epsilon = Rat(1, 2);
    PsiSpec psi;
    ProbSpec p;
    std::uint64_t window_lo = 1;
    std::uint64_t window_hi = 1000;
    std::uint64_t grid = 1000;
    std::uint32_t partition = 1;
    std::uint64_t exact_bound = 5000;
    std::uint64_t trials = 10000;
    std::uint64_t t_max = 32;
    std::uint64_t n_max = 0;  // sieve-table bound for divisor-sum cross-checks (0 = off)
    Rat tail_bound_max = Rat(3, 100);  // convergence-branch certification

    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

enum class HitMode { P, Q };
enum class CoverageMethod { Grid, Exact };

// psi units per n, built once per run.
std::vector<std::uint64_t> build_psi_table(const PsiSpec& psi, std::uint64_t n_max);

// The j-th coverage grid point: x_j = (j + r/P)/G with P the smallest prime
// above the window top and r = (P+1)/2. Equispaced a hair past the cell
// midpoints, and provably never equal to any fraction a/n with n <= N1:
// x_j = a/n would need P to divide r*n, impossible for a prime P > n.
// (Exact midpoints resonate: (2j+1)/(2G) lands on a/n whenever 2G | n(2j+1),
// which floods the count once the window passes 2G.)
Rat coverage_grid_point(const ExperimentConfig& cfg, std::uint64_t j);

// Whether x is within psi(n)/n of a selected fraction a/n (strictly). Only
// the two candidates around floor(n x) can qualify since psi <= 1/2; the
// wrap candidate a = n covers x near 0.
bool point_hit(const MembershipOracle& oracle, const PsiSpec& psi, const Rat& eps, const Rat& x,
               std::uint64_t n, HitMode mode);

struct CoverageResult {
    std::uint64_t grid = 0;
    std::uint64_t hits = 0;
    double fraction = 0.0;
    std::optional<Rat> exact_measure;     // exact method only
    std::vector<std::uint32_t> hit_counts;  // per grid point, when collected
};

// Grid method: fraction of midpoints (j + 1/2)/G hit by some n in the
// window. Exact method: exact measure of the union over the window
// (requires window_hi <= exact_bound).
CoverageResult window_coverage(const ExperimentConfig& cfg, HitMode mode, CoverageMethod method,
                               bool collect_counts = false);

// For each grid point, the first n in [window_lo, window_hi] that hits it
// (0 when never hit). Shared by coverage and the dichotomy trajectories.
std::vector<std::uint64_t> first_hit_table(const ExperimentConfig& cfg, HitMode mode);

struct DichotomyReport {
    Rat conv_tail_bound;  // exact Sum_{window} 2 p_n psi(n) of the convergent branch
    double conv_coverage = 0.0;
    double div_coverage = 0.0;
    std::vector<std::pair<std::uint64_t, double>> div_trajectory;  // (N_t, coverage)
    bool div_sparse = true;  // false when the divergence branch had to fall
                             // back to a single checkpoint at the window end
};

// Paired truncation experiment. Throws ConfigError when the branch passed
// as convergent fails its tail-bound certification.
DichotomyReport dichotomy_experiment(const ExperimentConfig& conv, const ExperimentConfig& div);

struct QiaPoint {
    std::uint64_t t = 0;
    std::uint64_t n_t = 0;
    std::uint32_t arc = 0;
    Rat numerator_sum;    // Sum_{n<=N_t} l(E_n^Q ∩ J)
    Rat denominator_sum;  // Sum_{m,n<=N_t} l(E_m^Q ∩ E_n^Q ∩ J)
    std::optional<Rat> ratio;
    std::optional<Rat> ratio_over_lambda;
};

struct QiaSeries {
    std::vector<std::uint64_t> checkpoints;
    std::vector<QiaPoint> points;                // checkpoint-major, arc-minor
    std::optional<Rat> min_ratio_over_lambda;    // over t >= 2, all arcs
    bool truncated = false;                      // t_max not reached within the exact bound
};

// The quasi-independence-on-average experiment: exact ratio series at the
// sparse checkpoints, one row per (checkpoint, partition arc).
QiaSeries qia_experiment(const ExperimentConfig& cfg);

}  // namespace randapprox
