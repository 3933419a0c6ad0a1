#include "randapprox/overlap_kernel.hpp"

#include <algorithm>

namespace randapprox::kernel {

void scale_segments(std::span<const std::uint64_t> members, std::uint64_t n, std::uint64_t psi_units,
                    u128 mult, std::vector<std::pair<u128, u128>>& out) {
    out.clear();
    if (psi_units == 0) return;
    const u128 circle = (u128{n} << 64) * mult;
    bool wrapped_tail = false;
    u128 tail_hi = 0;
    for (std::uint64_t a : members) {
        const u128 center = (u128{a} << 64) * mult;
        const u128 half = u128{psi_units} * mult;
        const u128 lo = center - half;  // a >= 1 and psi <= 1/2 keep this positive
        const u128 hi = center + half;
        if (hi > circle) {
            // only a = n wraps; its tail lands at the front of the circle
            wrapped_tail = true;
            tail_hi = hi - circle;
            if (lo < circle) out.emplace_back(lo, circle);
        } else {
            out.emplace_back(lo, hi);
        }
    }
    if (wrapped_tail && tail_hi > 0) out.insert(out.begin(), {u128{0}, tail_hi});
}

u128 intersection_units(std::span<const std::pair<u128, u128>> a, std::span<const std::pair<u128, u128>> b) {
    u128 total = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const u128 lo = std::max(a[i].first, b[j].first);
        const u128 hi = std::min(a[i].second, b[j].second);
        if (lo < hi) total += hi - lo;
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return total;
}

u128 intersection_units_clipped(std::span<const std::pair<u128, u128>> a,
                                std::span<const std::pair<u128, u128>> b, u128 clip_lo, u128 clip_hi) {
    u128 total = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        u128 lo = std::max(a[i].first, b[j].first);
        u128 hi = std::min(a[i].second, b[j].second);
        lo = std::max(lo, clip_lo);
        hi = std::min(hi, clip_hi);
        if (lo < hi) total += hi - lo;
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return total;
}

u128 length_units_clipped(std::span<const std::pair<u128, u128>> a, u128 clip_lo, u128 clip_hi) {
    u128 total = 0;
    for (const auto& [lo, hi] : a) {
        const u128 l = std::max(lo, clip_lo);
        const u128 h = std::min(hi, clip_hi);
        if (l < h) total += h - l;
    }
    return total;
}

}  // namespace randapprox::kernel
