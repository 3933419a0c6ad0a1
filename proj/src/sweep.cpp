#include "randapprox/sweep.hpp"

#include <algorithm>

namespace randapprox {

namespace {

bool event_less(const SweepEvent& a, const SweepEvent& b) {
    // positions compared exactly: pos/(den * 2^64) — the 2^64 cancels
    return a.pos_num * b.den_n < b.pos_num * a.den_n;
}

bool event_equal(const SweepEvent& a, const SweepEvent& b) {
    return a.pos_num * b.den_n == b.pos_num * a.den_n;
}

}  // namespace

void append_interval_events(std::vector<SweepEvent>& events, std::uint64_t n,
                            std::span<const std::uint64_t> members, std::uint64_t psi_units, i128 weight) {
    if (n < 1 || n > (1u << 24)) throw InputError("sweep intervals need 1 <= n <= 2^24");
    if (weight <= 0) throw InputError("sweep weight must be positive");
    if (psi_units == 0) return;
    if (psi_units > (std::uint64_t{1} << 63)) throw InputError("psi value outside [0, 1/2]");
    const std::uint32_t den = static_cast<std::uint32_t>(n);
    const u128 circle = u128{n} << 64;
    for (std::uint64_t a : members) {
        if (a < 1 || a > n) throw InputError("numerator outside [1, n]");
        const u128 center = u128{a} << 64;
        const u128 lo = center - psi_units;
        const u128 hi = center + psi_units;
        if (hi > circle) {  // only a = n wraps
            events.push_back({lo, den, weight});
            events.push_back({circle, den, -weight});
            events.push_back({u128{0}, den, weight});
            events.push_back({hi - circle, den, -weight});
        } else {
            events.push_back({lo, den, weight});
            events.push_back({hi, den, -weight});
        }
    }
}

DepthIntegrals sweep_depth(std::vector<SweepEvent>& events, std::uint32_t partition_m, unsigned weight_shift) {
    if (partition_m < 1) throw InputError("partition needs M >= 1");
    const std::uint32_t m = partition_m;
    for (std::uint32_t i = 0; i <= m; ++i) events.push_back({u128{i} << 64, m, 0});
    std::sort(events.begin(), events.end(), event_less);

    std::uint32_t max_den = m;
    for (const SweepEvent& e : events) max_den = std::max(max_den, e.den_n);

    // summation-by-parts coefficients, bucketed per (arc, denominator)
    std::vector<std::vector<Int>> coef1(m, std::vector<Int>(max_den + 1, Int(0)));
    std::vector<std::vector<Int>> coef2(m, std::vector<Int>(max_den + 1, Int(0)));
    std::vector<std::vector<Int>> coefc(m, std::vector<Int>(max_den + 1, Int(0)));
    std::vector<Rat> edge1(m, Rat(0)), edge2(m, Rat(0)), edgec(m, Rat(0));

    i128 depth = 0;
    std::uint32_t cur_arc = 0;
    std::size_t i = 0;
    while (i < events.size()) {
        std::size_t j = i;
        bool boundary = false;
        i128 delta_sum = 0;
        while (j < events.size() && event_equal(events[i], events[j])) {
            if (events[j].delta == 0) boundary = true;
            delta_sum += events[j].delta;
            ++j;
        }
        const Int v1_before(depth);
        const Int v2_before = v1_before * v1_before;
        const int vc_before = depth > 0 ? 1 : 0;
        depth += delta_sum;
        if (depth < 0) throw std::logic_error("sweep depth went negative");
        const Int v1_after(depth);
        const Int v2_after = v1_after * v1_after;
        const int vc_after = depth > 0 ? 1 : 0;

        if (boundary) {
            // partition boundary k/M: closes arc k-1, opens arc k
            const std::uint32_t k =
                static_cast<std::uint32_t>((events[i].pos_num * m) / (u128{events[i].den_n} << 64));
            const Rat pos = Rat(Int(k), Int(m));
            if (k > 0) {
                edge1[k - 1] += pos * Rat(v1_before);
                edge2[k - 1] += pos * Rat(v2_before);
                edgec[k - 1] += pos * Rat(vc_before);
            }
            if (k < m) {
                edge1[k] -= pos * Rat(v1_after);
                edge2[k] -= pos * Rat(v2_after);
                edgec[k] -= pos * Rat(vc_after);
                cur_arc = k;
            }
        } else if (delta_sum != 0 || v2_before != v2_after) {
            const Int pos = int_from_u128(events[i].pos_num);
            const std::uint32_t den = events[i].den_n;
            if (v1_before != v1_after) coef1[cur_arc][den] += (v1_before - v1_after) * pos;
            if (v2_before != v2_after) coef2[cur_arc][den] += (v2_before - v2_after) * pos;
            if (vc_before != vc_after) coefc[cur_arc][den] += Int(vc_before - vc_after) * pos;
        }
        i = j;
    }
    if (depth != 0) throw std::logic_error("sweep did not close all intervals");

    DepthIntegrals out;
    out.linear.assign(m, Rat(0));
    out.quadratic.assign(m, Rat(0));
    out.covered.assign(m, Rat(0));
    const Int two64 = Int(1) << 64;
    const Rat unit1 = Rat(Int(1), Int(1) << weight_shift);
    const Rat unit2 = Rat(Int(1), Int(1) << (2 * weight_shift));
    for (std::uint32_t arc = 0; arc < m; ++arc) {
        Rat t1 = edge1[arc], t2 = edge2[arc], tc = edgec[arc];
        for (std::uint32_t den = 1; den <= max_den; ++den) {
            const Int scale = Int(den) * two64;
            if (coef1[arc][den] != 0) t1 += Rat(coef1[arc][den], scale);
            if (coef2[arc][den] != 0) t2 += Rat(coef2[arc][den], scale);
            if (coefc[arc][den] != 0) tc += Rat(coefc[arc][den], scale);
        }
        out.linear[arc] = t1 * unit1;
        out.quadratic[arc] = t2 * unit2;
        out.covered[arc] = tc;
    }
    return out;
}

}  // namespace randapprox
