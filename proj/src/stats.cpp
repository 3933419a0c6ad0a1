#include "randapprox/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "randapprox/numtheory.hpp"
#include "randapprox/overlap_kernel.hpp"
#include "randapprox/randmodel.hpp"
#include "randapprox/sweep.hpp"

namespace randapprox {

namespace {

std::atomic<unsigned> g_threads{0};

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

constexpr std::uint64_t kJDrawTag = 0x4A44524157ULL;  // "JDRAW"

}  // namespace

void set_worker_threads(unsigned threads) { g_threads.store(threads); }

unsigned worker_threads() {
    const unsigned t = g_threads.load();
    if (t > 0) return t;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, unsigned)>& body) {
    if (begin >= end) return;
    const unsigned threads = std::min<std::uint64_t>(worker_threads(), end - begin);
    if (threads <= 1) {
        for (std::uint64_t i = begin; i < end; ++i) body(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t span = end - begin;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t lo = begin + span * t / threads;
        const std::uint64_t hi = begin + span * (t + 1) / threads;
        pool.emplace_back([&, lo, hi, t] {
            for (std::uint64_t i = lo; i < hi; ++i) body(i, t);
        });
    }
    for (auto& th : pool) th.join();
}

std::optional<Rat> qia_ratio(const std::vector<Rat>& measures, const std::vector<std::vector<Rat>>& overlaps,
                             std::size_t n) {
    if (measures.size() < n || overlaps.size() < n) throw InputError("qia ratio needs N measures and overlaps");
    for (std::size_t i = 0; i < n; ++i) {
        if (overlaps[i].size() < n) throw InputError("overlap matrix not square");
        if (overlaps[i][i] != measures[i]) throw InputError("overlap diagonal must equal measures");
        for (std::size_t j = i + 1; j < n; ++j)
            if (overlaps[i][j] != overlaps[j][i]) throw InputError("overlap matrix must be symmetric");
    }
    Rat num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += measures[i];
        for (std::size_t j = 0; j < n; ++j) den += overlaps[i][j];
    }
    if (den == 0) {
        if (num != 0) throw std::logic_error("qia denominator zero with nonzero numerator");
        return std::nullopt;
    }
    return num * num / den;
}

McEstimate mc_estimate(const std::function<double(std::uint64_t)>& statistic, std::uint64_t trials,
                       std::uint64_t base_seed) {
    if (trials < 2) throw InputError("mc estimate needs at least 2 trials");
    std::vector<double> values(trials);
    parallel_for(0, trials, [&](std::uint64_t t, unsigned) { values[t] = statistic(trial_seed(base_seed, t)); });
    const double mean = pairwise_sum(values) / static_cast<double>(trials);
    std::vector<double> sq(trials);
    for (std::uint64_t t = 0; t < trials; ++t) sq[t] = (values[t] - mean) * (values[t] - mean);
    const double variance = pairwise_sum(sq) / static_cast<double>(trials - 1);
    return {trials, mean, variance, std::sqrt(variance / static_cast<double>(trials))};
}

LemmaSReport verify_lemma_s(std::uint64_t n_lo, std::uint64_t n_hi, const Rat& eps, const Arc& j,
                            bool with_table) {
    if (n_lo < 1 || n_hi < n_lo) throw InputError("bad n range");
    const Rat lambda_j = j.length();
    LemmaSReport report;
    bool have_min = false;
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
        const std::uint64_t count = s_count_in_arc(n, eps, j);
        const Rat ratio = Rat(Int(count)) / (lambda_j * eps * Rat(Int(n)));
        if (count > 0 && report.first_positive_n == 0) report.first_positive_n = n;
        if (!have_min || ratio < report.min_ratio) {
            report.min_ratio = ratio;
            report.argmin_n = n;
            have_min = true;
        }
        if (with_table) report.rows.push_back({n, count, ratio});
    }
    return report;
}

OverlapBoundReport verify_overlap_bound(const std::vector<std::uint64_t>& n_grid, const PsiSpec& psi,
                                        const ProbSpec& p, const Rat& eps) {
    if (n_grid.empty()) throw InputError("overlap bound needs a grid of N values");
    std::vector<std::uint64_t> grid = n_grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const std::uint64_t n_max = grid.back();

    const Int two64 = Int(1) << 64;
    std::vector<SweepEvent> master;
    std::vector<Rat> p_eff(n_max + 1), lambda_s(n_max + 1), term(n_max + 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const NumeratorSet s = s_set(n, eps);
        const Dyadic64 psi_n = eval_psi(psi, n);
        const u128 thr = eval_p(p, n).threshold.units;
        p_eff[n] = Rat(int_from_u128(thr), two64);
        // arcs of E_n^S are disjoint for psi <= 1/2, so the measure is a
        // closed form |S_n| * 2 psi / n
        lambda_s[n] = Rat(Int(s.members.size()) * 2 * Int(psi_n.units), Int(n) * two64);
        term[n] = p_eff[n] * psi_n.to_rat();
        if (thr > 0) append_interval_events(master, n, s.members, psi_n.units, static_cast<i128>(thr));
    }

    OverlapBoundReport report;
    report.max_ratio = Rat(0);
    std::vector<double> xs, ys;
    for (std::uint64_t cap : grid) {
        std::vector<SweepEvent> events;
        events.reserve(master.size());
        for (const SweepEvent& e : master)
            if (e.den_n <= cap) events.push_back(e);
        const DepthIntegrals ints = sweep_depth(events, 1, 64);
        Rat lhs = ints.quadratic[0];
        Rat linear = 0;
        for (std::uint64_t n = 1; n <= cap; ++n) {
            lhs += (p_eff[n] - p_eff[n] * p_eff[n]) * lambda_s[n];
            linear += term[n];
        }
        OverlapBoundRow row;
        row.n_cap = cap;
        row.lhs = lhs;
        row.rhs_core = linear * linear;
        row.rhs_linear = linear;
        row.ratio = (row.rhs_core + row.rhs_linear) == 0 ? Rat(0) : lhs / (row.rhs_core + row.rhs_linear);
        if (row.ratio > report.max_ratio) report.max_ratio = row.ratio;
        xs.push_back(std::log(static_cast<double>(cap)));
        ys.push_back(rat_to_double(row.ratio));
        report.rows.push_back(std::move(row));
    }
    if (grid.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double denom = n * sxx - sx * sx;
        report.log_slope = denom == 0 ? 0.0 : (n * sxy - sx * sy) / denom;
    }
    return report;
}

namespace {

// Shared Monte Carlo engine: per trial, draw the partition arc J and the
// selections jointly, then accumulate every pairwise overlap
// l(E_m^Q ∩ E_n^Q ∩ J) for m <= n <= n_cap as exact integers over fixed
// per-pair denominators.
struct PairMc {
    std::uint64_t n_cap = 0;
    std::uint32_t partition = 1;
    std::uint64_t trials = 0;
    std::vector<std::size_t> pair_of;    // (m-1) + (n-1)*n_cap -> pair index (m <= n)
    std::vector<std::uint64_t> pair_m, pair_n;
    std::vector<Int> d_mn;               // lcm(m,n) * M * 2^64
    std::vector<Int> sum, sum_sq;        // per pair, units over d_mn
    Int tot_sum = 0, tot_sum_sq = 0;     // ordered-sum total units over d_tot
    Int d_tot = 1;

    std::size_t index(std::uint64_t m, std::uint64_t n) const { return pair_of[(m - 1) + (n - 1) * n_cap]; }

    Rat pair_mean(std::size_t k) const { return Rat(sum[k], Int(trials) * d_mn[k]); }

    Rat pair_variance(std::size_t k) const {
        const Int t(trials);
        return Rat(t * sum_sq[k] - sum[k] * sum[k], t * (t - 1)) / Rat(d_mn[k] * d_mn[k]);
    }

    Rat total_variance() const {
        const Int t(trials);
        return Rat(t * tot_sum_sq - tot_sum * tot_sum, t * (t - 1)) / Rat(d_tot * d_tot);
    }
};

PairMc run_pair_mc(const PsiSpec& psi, const ProbSpec& p, const Rat& eps, std::uint64_t n_cap,
                   std::uint32_t partition_m, std::uint64_t trials, std::uint64_t seed) {
    if (n_cap < 1) throw InputError("pair Monte Carlo needs n_cap >= 1");
    if (partition_m < 1) throw InputError("pair Monte Carlo needs M >= 1");
    if (trials < 2) throw InputError("pair Monte Carlo needs at least 2 trials");

    PairMc mc;
    mc.n_cap = n_cap;
    mc.partition = partition_m;
    mc.trials = trials;

    std::vector<std::vector<std::uint64_t>> s_members(n_cap + 1);
    std::vector<std::uint64_t> psi_units(n_cap + 1, 0);
    std::vector<u128> thresholds(n_cap + 1, 0);
    for (std::uint64_t n = 1; n <= n_cap; ++n) {
        s_members[n] = s_set(n, eps).members;
        psi_units[n] = eval_psi(psi, n).units;
        thresholds[n] = eval_p(p, n).threshold.units;
    }

    Int lcm_all = 1;
    for (std::uint64_t n = 1; n <= n_cap; ++n) lcm_all = boost::multiprecision::lcm(lcm_all, Int(n));
    const Int two64 = Int(1) << 64;
    mc.d_tot = lcm_all * partition_m * two64;

    mc.pair_of.assign(n_cap * n_cap, 0);
    std::vector<std::uint64_t> lcm_mn;
    std::vector<Int> to_common;
    for (std::uint64_t n = 1; n <= n_cap; ++n) {
        for (std::uint64_t m = 1; m <= n; ++m) {
            const std::size_t k = mc.pair_m.size();
            mc.pair_of[(m - 1) + (n - 1) * n_cap] = k;
            mc.pair_m.push_back(m);
            mc.pair_n.push_back(n);
            const std::uint64_t l = std::lcm(m, n);
            lcm_mn.push_back(l);
            mc.d_mn.push_back(Int(l) * partition_m * two64);
            to_common.push_back(lcm_all / l);
        }
    }
    const std::size_t pairs = mc.pair_m.size();
    mc.sum.assign(pairs, Int(0));
    mc.sum_sq.assign(pairs, Int(0));

    const unsigned threads = worker_threads();
    struct Shard {
        std::vector<Int> sum, sum_sq;
        Int tot_sum = 0, tot_sum_sq = 0;
    };
    std::vector<Shard> shards(threads);
    for (Shard& s : shards) {
        s.sum.assign(pairs, Int(0));
        s.sum_sq.assign(pairs, Int(0));
    }

    struct Workspace {
        std::vector<std::vector<std::uint64_t>> selected;
        std::vector<std::pair<u128, u128>> seg_a, seg_b;
    };
    std::vector<Workspace> work(threads);
    for (Workspace& w : work) w.selected.assign(n_cap + 1, {});

    parallel_for(0, trials, [&](std::uint64_t t, unsigned shard_idx) {
        Shard& shard = shards[shard_idx];
        Workspace& w = work[shard_idx];
        const std::uint64_t ts = trial_seed(seed, t);
        const std::uint64_t j_idx = uniform_index(ts, kJDrawTag, partition_m);

        for (std::uint64_t n = 1; n <= n_cap; ++n) {
            auto& sel = w.selected[n];
            sel.clear();
            const u128 thr = thresholds[n];
            if (thr == 0) continue;
            for (std::uint64_t a : s_members[n])
                if (static_cast<u128>(prf64(ts, n, a)) < thr) sel.push_back(a);
        }

        Int trial_total = 0;
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::uint64_t m = mc.pair_m[k];
            const std::uint64_t n = mc.pair_n[k];
            if (psi_units[m] == 0 || psi_units[n] == 0) continue;
            const std::uint64_t l = lcm_mn[k];
            const u128 arc_len = u128{l} << 64;  // circle / M
            const u128 clip_lo = arc_len * j_idx;
            const u128 clip_hi = clip_lo + arc_len;
            u128 x = 0;
            if (m == n) {
                kernel::scale_segments(w.selected[n], n, psi_units[n], u128{partition_m} * (l / n), w.seg_a);
                x = kernel::length_units_clipped(w.seg_a, clip_lo, clip_hi);
            } else {
                kernel::scale_segments(w.selected[m], m, psi_units[m], u128{partition_m} * (l / m), w.seg_a);
                kernel::scale_segments(w.selected[n], n, psi_units[n], u128{partition_m} * (l / n), w.seg_b);
                x = kernel::intersection_units_clipped(w.seg_a, w.seg_b, clip_lo, clip_hi);
            }
            if (x == 0) continue;
            const Int xi = int_from_u128(x);
            shard.sum[k] += xi;
            shard.sum_sq[k] += xi * xi;
            trial_total += (m == n ? 1 : 2) * to_common[k] * xi;
        }
        shard.tot_sum += trial_total;
        shard.tot_sum_sq += trial_total * trial_total;
    });

    for (const Shard& s : shards) {
        for (std::size_t k = 0; k < pairs; ++k) {
            mc.sum[k] += s.sum[k];
            mc.sum_sq[k] += s.sum_sq[k];
        }
        mc.tot_sum += s.tot_sum;
        mc.tot_sum_sq += s.tot_sum_sq;
    }
    return mc;
}

}  // namespace

VarSubaddReport verify_var_subadditivity(const PsiSpec& psi, const ProbSpec& p, const Rat& eps,
                                         std::uint64_t n_cap, std::uint32_t partition_m, std::uint64_t trials,
                                         std::uint64_t seed) {
    const PairMc mc = run_pair_mc(psi, p, eps, n_cap, partition_m, trials, seed);
    VarSubaddReport report;
    report.trials = trials;
    report.status = trials < 1000 ? VerifyStatus::Warning : VerifyStatus::Ok;
    report.lhs_var = mc.total_variance();
    Rat rhs = 0;
    for (std::size_t k = 0; k < mc.pair_m.size(); ++k)
        rhs += Rat(Int(mc.pair_m[k] == mc.pair_n[k] ? 1 : 2)) * mc.pair_variance(k);
    report.rhs_sum_var = rhs;
    report.ratio = rhs == 0 ? 0.0 : rat_to_double(report.lhs_var / rhs);
    return report;
}

std::vector<PairOverlapMcRow> mc_pair_overlaps(const PsiSpec& psi, const ProbSpec& p, const Rat& eps,
                                               std::uint64_t n_hi, std::uint64_t trials, std::uint64_t seed) {
    if (n_hi < 2) throw InputError("pair overlaps need n_hi >= 2");
    const PairMc mc = run_pair_mc(psi, p, eps, n_hi, 1, trials, seed);
    std::vector<PairOverlapMcRow> rows;
    rows.reserve(n_hi * (n_hi - 1) / 2);
    for (std::uint64_t n = 2; n <= n_hi; ++n) {
        for (std::uint64_t m = 1; m < n; ++m) {
            const std::size_t k = mc.index(m, n);
            rows.push_back({m, n, mc.pair_mean(k), mc.pair_variance(k)});
        }
    }
    return rows;
}

VartwoReport verify_vartwo_bound(const PsiSpec& psi, const ProbSpec& p, const Rat& eps, std::uint64_t n_hi,
                                 std::uint32_t partition_m, std::uint64_t trials, std::uint64_t seed) {
    if (n_hi < 2) throw InputError("vartwo needs n_hi >= 2");
    const PairMc mc = run_pair_mc(psi, p, eps, n_hi, partition_m, trials, seed);
    VartwoReport report;
    for (std::uint64_t n = 2; n <= n_hi; ++n) {
        for (std::uint64_t m = 1; m < n; ++m) {
            VartwoRow row;
            row.m = m;
            row.n = n;
            row.variance = mc.pair_variance(mc.index(m, n));
            const Rat pm = eval_p(p, m).value, pn = eval_p(p, n).value;
            row.base = pm * pn * eval_psi(psi, m).to_rat() * eval_psi(psi, n).to_rat() +
                       expected_overlap_q(m, n, psi, p, eps);
            row.c = row.base == 0 ? 0.0 : rat_to_double(row.variance / row.base);
            report.max_c = std::max(report.max_c, row.c);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace randapprox
