#include "randapprox/experiments.hpp"

#include <algorithm>
#include <numeric>

#include "randapprox/approxsets.hpp"
#include "randapprox/stats.hpp"
#include "randapprox/sweep.hpp"

namespace randapprox {

void ExperimentConfig::validate() const {
    psi.validate();
    p.validate();
    if (epsilon <= 0 || epsilon > 1) throw ConfigError("epsilon must lie in (0, 1]");
    if (window_lo < 1 || window_hi < window_lo) throw ConfigError("window must satisfy 1 <= N0 <= N1");
    if (grid < 1) throw ConfigError("grid must be positive");
    if (partition < 1) throw ConfigError("partition must be positive");
    if (partition > 1000000) throw ConfigError("partition beyond 10^6 arcs is not supported");
    if (t_max < 1) throw ConfigError("t_max must be positive");
    if (trials < 2) throw ConfigError("trials must be at least 2");
}

std::vector<std::uint64_t> build_psi_table(const PsiSpec& psi, std::uint64_t n_max) {
    std::vector<std::uint64_t> units(n_max + 1, 0);
    for (std::uint64_t n = 1; n <= n_max; ++n) units[n] = eval_psi(psi, n).units;
    return units;
}

namespace {

// Candidate numerators for x: c in {floor(nx), floor(nx)+1}, tested as real
// positions c/n in [0, 1]; the oracle index maps c = 0 to a = n (the wrap).
bool hit_candidate(const MembershipOracle& oracle, const Rat& eps, std::uint64_t n, std::uint64_t candidate,
                   const Rat& x, const Rat& radius, HitMode mode) {
    const Rat dist = x - Rat(Int(candidate), Int(n));
    if (!(boost::multiprecision::abs(dist) < radius)) return false;
    const std::uint64_t a = candidate == 0 ? n : candidate;
    if (mode == HitMode::Q && !s_membership(a, n, eps)) return false;
    return oracle.member(n, a);
}

}  // namespace

bool point_hit(const MembershipOracle& oracle, const PsiSpec& psi, const Rat& eps, const Rat& x,
               std::uint64_t n, HitMode mode) {
    if (n < 1) throw InputError("point hit needs n >= 1");
    const Dyadic64 psi_n = eval_psi(psi, n);
    if (psi_n.units == 0) return false;
    const Rat xr = rat_mod1(x);
    const Rat radius = Rat(Int(psi_n.units), Int(n) << 64);
    const std::uint64_t c0 = rat_floor(xr * Rat(Int(n))).convert_to<std::uint64_t>();
    return hit_candidate(oracle, eps, n, c0, xr, radius, mode) ||
           hit_candidate(oracle, eps, n, c0 + 1, xr, radius, mode);
}

namespace {

// Integer form of the coverage grid: x_j = (j P + r) / (G P).
struct GridGeometry {
    std::uint64_t prime;
    std::uint64_t offset;
    std::uint64_t den;  // G * P

    std::uint64_t pos_num(std::uint64_t j) const { return j * prime + offset; }
};

GridGeometry grid_geometry(const ExperimentConfig& cfg) {
    GridGeometry geo;
    geo.prime = next_prime_above(std::max<std::uint64_t>(cfg.window_hi, 2));
    geo.offset = (geo.prime + 1) / 2;
    geo.den = cfg.grid * geo.prime;
    if (u128{geo.den} * cfg.window_hi > (u128{1} << 62))
        throw ResourceError("grid resolution times window exceeds the integer fast-path budget");
    return geo;
}

}  // namespace

Rat coverage_grid_point(const ExperimentConfig& cfg, std::uint64_t j) {
    if (j >= cfg.grid) throw InputError("grid index out of range");
    const GridGeometry geo = grid_geometry(cfg);
    return Rat(Int(geo.pos_num(j)), Int(geo.den));
}

std::vector<std::uint64_t> first_hit_table(const ExperimentConfig& cfg, HitMode mode) {
    cfg.validate();
    const std::uint64_t g = cfg.grid;
    const GridGeometry geo = grid_geometry(cfg);
    const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
    const std::vector<std::uint64_t> psi_units = build_psi_table(cfg.psi, cfg.window_hi);

    std::vector<std::uint64_t> first_hit(g, 0);
    parallel_for(0, g, [&](std::uint64_t j, unsigned) {
        // |x - c/n| < psi/n  <=>  |x_num n - c G P| * 2^64 < G P psi_units
        const std::uint64_t x_num = geo.pos_num(j);
        for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
            const std::uint64_t s = psi_units[n];
            if (s == 0) continue;
            const u128 rhs = u128{geo.den} * s;
            const std::uint64_t xn = x_num * n;
            const std::uint64_t c0 = xn / geo.den;
            bool hit = false;
            for (std::uint64_t c = c0; c <= c0 + 1 && !hit; ++c) {
                const std::uint64_t cd = c * geo.den;
                const u128 dist = xn >= cd ? u128{xn - cd} : u128{cd - xn};
                if (!((dist << 64) < rhs)) continue;
                const std::uint64_t a = c == 0 ? n : c;
                if (mode == HitMode::Q && !s_membership(a, n, cfg.epsilon)) continue;
                if (oracle.member(n, a)) hit = true;
            }
            if (hit) {
                first_hit[j] = n;
                break;
            }
        }
    });
    return first_hit;
}

CoverageResult window_coverage(const ExperimentConfig& cfg, HitMode mode, CoverageMethod method,
                               bool collect_counts) {
    cfg.validate();
    CoverageResult result;
    if (method == CoverageMethod::Exact) {
        if (cfg.window_hi > cfg.exact_bound)
            throw ResourceError("exact coverage needs window_hi <= exact_bound (" +
                                std::to_string(cfg.window_hi) + " > " + std::to_string(cfg.exact_bound) + ")");
        const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
        std::vector<SweepEvent> events;
        for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
            const std::uint64_t s = eval_psi(cfg.psi, n).units;
            if (s == 0) continue;
            const NumeratorSet set = mode == HitMode::P ? oracle.sample_p(n) : oracle.sample_q(n);
            if (!set.members.empty()) append_interval_events(events, n, set.members, s, 1);
        }
        const DepthIntegrals ints = sweep_depth(events, 1, 0);
        result.exact_measure = ints.covered[0];
        result.fraction = rat_to_double(*result.exact_measure);
        result.grid = cfg.grid;
        return result;
    }

    const std::vector<std::uint64_t> first_hit = first_hit_table(cfg, mode);
    result.grid = cfg.grid;
    for (std::uint64_t h : first_hit)
        if (h != 0) ++result.hits;
    result.fraction = static_cast<double>(result.hits) / static_cast<double>(cfg.grid);
    if (collect_counts) {
        // count every hitting n per point (no early exit)
        const GridGeometry geo = grid_geometry(cfg);
        const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, cfg.window_hi);
        const std::vector<std::uint64_t> psi_units = build_psi_table(cfg.psi, cfg.window_hi);
        result.hit_counts.assign(cfg.grid, 0);
        parallel_for(0, cfg.grid, [&](std::uint64_t j, unsigned) {
            const std::uint64_t x_num = geo.pos_num(j);
            std::uint32_t count = 0;
            for (std::uint64_t n = cfg.window_lo; n <= cfg.window_hi; ++n) {
                const std::uint64_t s = psi_units[n];
                if (s == 0) continue;
                const u128 rhs = u128{geo.den} * s;
                const std::uint64_t xn = x_num * n;
                const std::uint64_t c0 = xn / geo.den;
                for (std::uint64_t c = c0; c <= c0 + 1; ++c) {
                    const std::uint64_t cd = c * geo.den;
                    const u128 dist = xn >= cd ? u128{xn - cd} : u128{cd - xn};
                    if (!((dist << 64) < rhs)) continue;
                    const std::uint64_t a = c == 0 ? n : c;
                    if (mode == HitMode::Q && !s_membership(a, n, cfg.epsilon)) continue;
                    if (oracle.member(n, a)) {
                        ++count;
                        break;
                    }
                }
            }
            result.hit_counts[j] = count;
        });
    }
    return result;
}

DichotomyReport dichotomy_experiment(const ExperimentConfig& conv, const ExperimentConfig& div) {
    conv.validate();
    div.validate();
    DichotomyReport report;

    // certification: the branch passed as convergent must keep its exact
    // expected tail measure under the declared bound
    Rat tail = 0;
    for (std::uint64_t n = conv.window_lo + 1; n <= conv.window_hi; ++n)
        tail += Rat(2) * eval_p(conv.p, n).value * eval_psi(conv.psi, n).to_rat();
    if (tail > conv.tail_bound_max)
        throw ConfigError("convergent branch failed certification: tail sum " + rat_to_decimal(tail) +
                          " exceeds bound " + rat_to_decimal(conv.tail_bound_max));
    report.conv_tail_bound = tail;
    report.conv_coverage = window_coverage(conv, HitMode::P, CoverageMethod::Grid).fraction;

    std::vector<std::uint64_t> checkpoints;
    try {
        checkpoints = sparse_sequence(div.psi, div.p, div.t_max, div.window_hi);
        report.div_sparse = true;
    } catch (const ConfigError&) {
        checkpoints = {div.window_hi};
        report.div_sparse = false;
    }
    const std::vector<std::uint64_t> first_hit = first_hit_table(div, HitMode::P);
    for (std::uint64_t n_t : checkpoints) {
        std::uint64_t hits = 0;
        for (std::uint64_t h : first_hit)
            if (h != 0 && h <= n_t) ++hits;
        report.div_trajectory.emplace_back(n_t, static_cast<double>(hits) / static_cast<double>(div.grid));
    }
    report.div_coverage = report.div_trajectory.back().second;
    return report;
}

QiaSeries qia_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    QiaSeries series;
    std::vector<std::uint64_t> checkpoints = sparse_sequence(cfg.psi, cfg.p, cfg.t_max, cfg.exact_bound);
    series.truncated = checkpoints.size() < cfg.t_max;
    series.checkpoints = checkpoints;
    const std::uint64_t n_top = checkpoints.back();
    const std::uint32_t m = cfg.partition;

    const MembershipOracle oracle(cfg.seed, cfg.p, cfg.epsilon, n_top);
    std::vector<SweepEvent> master;
    for (std::uint64_t n = 1; n <= n_top; ++n) {
        const std::uint64_t s = eval_psi(cfg.psi, n).units;
        if (s == 0) continue;
        const NumeratorSet q = oracle.sample_q(n);
        if (!q.members.empty()) append_interval_events(master, n, q.members, s, 1);
    }

    const Rat lambda_j = Rat(1, Int(m));
    for (std::size_t ti = 0; ti < checkpoints.size(); ++ti) {
        const std::uint64_t n_t = checkpoints[ti];
        std::vector<SweepEvent> events;
        events.reserve(master.size());
        for (const SweepEvent& e : master)
            if (e.den_n <= n_t) events.push_back(e);
        const DepthIntegrals ints = sweep_depth(events, m, 0);
        for (std::uint32_t arc = 0; arc < m; ++arc) {
            QiaPoint point;
            point.t = ti + 1;
            point.n_t = n_t;
            point.arc = arc;
            point.numerator_sum = ints.linear[arc];
            point.denominator_sum = ints.quadratic[arc];
            if (point.denominator_sum != 0) {
                point.ratio = point.numerator_sum * point.numerator_sum / point.denominator_sum;
                // Cauchy-Schwarz: the ratio can never exceed lambda(J)
                if (*point.ratio > lambda_j) throw std::logic_error("qia ratio exceeded lambda(J)");
                point.ratio_over_lambda = *point.ratio / lambda_j;
                if (point.t >= 2 &&
                    (!series.min_ratio_over_lambda || *point.ratio_over_lambda < *series.min_ratio_over_lambda))
                    series.min_ratio_over_lambda = point.ratio_over_lambda;
            }
            series.points.push_back(std::move(point));
        }
    }
    return series;
}

}  // namespace randapprox
