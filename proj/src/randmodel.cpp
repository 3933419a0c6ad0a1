#include "randapprox/randmodel.hpp"

namespace randapprox {

std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t tag, std::uint64_t m) {
    if (m == 0) throw InputError("uniform draw from empty range");
    // accept into the largest window that is a multiple of m, so the draw
    // is unbiased for every m
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % m);
    for (std::uint64_t k = 0;; ++k) {
        const std::uint64_t r = prf64(seed, tag, k);
        if (r < limit) return r % m;
    }
}

MembershipOracle::MembershipOracle(std::uint64_t seed, ProbSpec p, Rat eps, std::uint64_t n_max)
    : seed_(seed), prob_(std::move(p)), eps_(std::move(eps)) {
    if (n_max < 1) throw InputError("oracle needs n_max >= 1");
    prob_.validate();
    thresholds_.resize(n_max + 1);
    for (std::uint64_t n = 1; n <= n_max; ++n) thresholds_[n] = eval_p(prob_, n).threshold;
}

const SelectionThreshold& MembershipOracle::threshold(std::uint64_t n) const {
    if (n < 1 || n >= thresholds_.size()) throw InputError("oracle query beyond n_max");
    return thresholds_[n];
}

bool MembershipOracle::member(std::uint64_t n, std::uint64_t a) const {
    if (a < 1 || a > n) throw InputError("numerator outside [1, n]");
    return threshold(n).accepts(prf64(seed_, n, a));
}

NumeratorSet MembershipOracle::sample_p(std::uint64_t n) const {
    const SelectionThreshold& thr = threshold(n);
    NumeratorSet out;
    out.n = n;
    out.kind = SetKind::P;
    for (std::uint64_t a = 1; a <= n; ++a)
        if (thr.accepts(prf64(seed_, n, a))) out.members.push_back(a);
    return out;
}

NumeratorSet MembershipOracle::sample_q(std::uint64_t n) const {
    NumeratorSet s = s_set(n, eps_);
    NumeratorSet q = sample_q_from(s);
    return q;
}

NumeratorSet MembershipOracle::sample_q_from(const NumeratorSet& s) const {
    const SelectionThreshold& thr = threshold(s.n);
    NumeratorSet out;
    out.n = s.n;
    out.kind = SetKind::Q;
    for (std::uint64_t a : s.members)
        if (thr.accepts(prf64(seed_, s.n, a))) out.members.push_back(a);
    return out;
}

}  // namespace randapprox
