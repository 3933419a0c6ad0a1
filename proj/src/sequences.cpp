#include "randapprox/sequences.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "randapprox/numtheory.hpp"

namespace randapprox {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_quad;

// floor(v * 2^64) for exact rational v >= 0, saturated at cap.
u128 dyadic_floor(const Rat& v, u128 cap) {
    Int scaled = (rat_num(v) << 64) / rat_den(v);
    Int capped = int_from_u128(cap);
    if (scaled >= capped) return cap;
    return scaled.convert_to<u128>();
}

// floor(2^64 * c * n^{alpha/beta}) saturated at cap, via an integer root
// search: s passes iff s^beta * cd^beta * n^{max(-alpha,0)} <=
// 2^{64 beta} * cn^beta * n^{max(alpha,0)}. No floating point.
u128 dyadic_floor_power(const Rat& c, const Rat& exponent, std::uint64_t n, u128 cap) {
    if (c == 0) return 0;
    const Int alpha = rat_num(exponent);
    const Int beta = rat_den(exponent);  // >= 1, exponent canonical
    const unsigned b = beta.convert_to<unsigned>();
    const Int np = boost::multiprecision::pow(Int(n), alpha >= 0 ? alpha.convert_to<unsigned>() : 0u);
    const Int nq = boost::multiprecision::pow(Int(n), alpha < 0 ? (-alpha).convert_to<unsigned>() : 0u);
    const Int rhs = (Int(1) << (64 * b)) * boost::multiprecision::pow(rat_num(c), b) * np;
    const Int den_side = boost::multiprecision::pow(rat_den(c), b) * nq;
    auto passes = [&](const Int& s) { return boost::multiprecision::pow(s, b) * den_side <= rhs; };
    Int hi = int_from_u128(cap);
    if (passes(hi)) return cap;
    Int lo = 0;  // passes(0) always
    while (hi - lo > 1) {
        Int mid = (lo + hi) / 2;
        (passes(mid) ? lo : hi) = mid;
    }
    return lo.convert_to<u128>();
}

// floor(2^64 * c * (ln n)^{-gamma}) saturated at cap, evaluated in a
// 113-bit software float: deterministic on every platform, and the 49
// guard bits beyond the 64 fractional bits keep the floor faithful.
// Integer and half-integer gamma (every shipped config) run through plain
// powers and a square root instead of the exp/log kernel.
u128 dyadic_floor_log_power(const Rat& c, const Rat& gamma, std::uint64_t n, u128 cap) {
    if (c == 0) return 0;
    const BigFloat ln = log(BigFloat(n));
    BigFloat denom;
    if (rat_den(gamma) == 1) {
        denom = pow(ln, rat_num(gamma).convert_to<unsigned>());
    } else if (rat_den(gamma) == 2) {
        denom = pow(ln, (rat_num(gamma) / 2).convert_to<unsigned>()) * sqrt(ln);
    } else {
        const BigFloat gf = BigFloat(rat_num(gamma).str()) / BigFloat(rat_den(gamma).str());
        denom = pow(ln, gf);
    }
    const BigFloat v = BigFloat(rat_num(c).str()) / BigFloat(rat_den(c).str()) / denom;
    const BigFloat scaled = ldexp(v, 64);
    if (scaled >= BigFloat(int_from_u128(cap).str())) return cap;
    if (scaled <= 0) return 0;
    return scaled.convert_to<Int>().convert_to<u128>();
}

void require_nonneg(const std::vector<Rat>& params, const char* what) {
    for (const Rat& p : params)
        if (p < 0) throw ConfigError(std::string(what) + " parameters must be non-negative");
}

}  // namespace

const char* family_name(PsiFamily f) {
    switch (f) {
        case PsiFamily::Constant: return "constant";
        case PsiFamily::Power: return "power";
        case PsiFamily::LogPower: return "log-power";
        case PsiFamily::Table: return "table";
    }
    return "?";
}

const char* family_name(ProbFamily f) {
    switch (f) {
        case ProbFamily::Constant: return "constant";
        case ProbFamily::LogPower: return "log-power";
        case ProbFamily::TotientRatio: return "totient-ratio";
        case ProbFamily::Table: return "table";
    }
    return "?";
}

PsiFamily psi_family_from_name(const std::string& name) {
    if (name == "constant") return PsiFamily::Constant;
    if (name == "power") return PsiFamily::Power;
    if (name == "log-power") return PsiFamily::LogPower;
    if (name == "table") return PsiFamily::Table;
    throw ConfigError("unknown psi family: " + name);
}

ProbFamily prob_family_from_name(const std::string& name) {
    if (name == "constant") return ProbFamily::Constant;
    if (name == "log-power") return ProbFamily::LogPower;
    if (name == "totient-ratio") return ProbFamily::TotientRatio;
    if (name == "table") return ProbFamily::Table;
    throw ConfigError("unknown p family: " + name);
}

PsiSpec PsiSpec::constant(Rat c) { return {PsiFamily::Constant, {std::move(c)}, false}; }
PsiSpec PsiSpec::power(Rat c, Rat exponent) { return {PsiFamily::Power, {std::move(c), std::move(exponent)}, false}; }
PsiSpec PsiSpec::log_power(Rat c, Rat gamma) { return {PsiFamily::LogPower, {std::move(c), std::move(gamma)}, false}; }
PsiSpec PsiSpec::table(std::vector<Rat> values) { return {PsiFamily::Table, std::move(values), false}; }

void PsiSpec::validate() const {
    switch (family) {
        case PsiFamily::Constant:
            if (params.size() != 1) throw ConfigError("psi constant family takes one parameter");
            require_nonneg(params, "psi");
            break;
        case PsiFamily::Power:
            if (params.size() != 2) throw ConfigError("psi power family takes {c, exponent}");
            if (params[0] < 0) throw ConfigError("psi power coefficient must be non-negative");
            break;
        case PsiFamily::LogPower:
            if (params.size() != 2) throw ConfigError("psi log-power family takes {c, gamma}");
            require_nonneg(params, "psi");
            break;
        case PsiFamily::Table:
            require_nonneg(params, "psi");
            break;
    }
}

ProbSpec ProbSpec::constant(Rat c) { return {ProbFamily::Constant, {std::move(c)}}; }
ProbSpec ProbSpec::log_power(Rat c, Rat gamma) { return {ProbFamily::LogPower, {std::move(c), std::move(gamma)}}; }
ProbSpec ProbSpec::totient_ratio(Rat c) { return {ProbFamily::TotientRatio, {std::move(c)}}; }
ProbSpec ProbSpec::table(std::vector<Rat> values) { return {ProbFamily::Table, std::move(values)}; }

void ProbSpec::validate() const {
    switch (family) {
        case ProbFamily::Constant:
            if (params.size() != 1) throw ConfigError("p constant family takes one parameter");
            if (params[0] < 0 || params[0] > 1) throw ConfigError("constant p must lie in [0, 1]");
            break;
        case ProbFamily::LogPower:
            if (params.size() != 2) throw ConfigError("p log-power family takes {c, gamma}");
            require_nonneg(params, "p");
            break;
        case ProbFamily::TotientRatio:
            if (params.size() != 1) throw ConfigError("p totient-ratio family takes one parameter");
            require_nonneg(params, "p");
            break;
        case ProbFamily::Table:
            require_nonneg(params, "p");
            for (const Rat& v : params)
                if (v > 1) throw ConfigError("table p values must lie in [0, 1]");
            break;
    }
}

Dyadic64 eval_psi(const PsiSpec& spec, std::uint64_t n) {
    if (n < 1) throw InputError("psi is defined for n >= 1");
    spec.validate();
    const u128 cap = spec.clamp_quarter ? (u128{1} << 62) : (u128{1} << 63);
    u128 units = 0;
    switch (spec.family) {
        case PsiFamily::Constant:
            units = dyadic_floor(spec.params[0], cap);
            break;
        case PsiFamily::Power:
            units = dyadic_floor_power(spec.params[0], spec.params[1], n, cap);
            break;
        case PsiFamily::LogPower:
            if (spec.params[1] == 0) {
                units = dyadic_floor(spec.params[0], cap);
            } else if (n == 1) {
                units = spec.params[0] == 0 ? 0 : cap;  // (ln 1)^{-g} -> clamp
            } else {
                units = dyadic_floor_log_power(spec.params[0], spec.params[1], n, cap);
            }
            break;
        case PsiFamily::Table:
            if (n <= spec.params.size()) units = dyadic_floor(spec.params[n - 1], cap);
            break;
    }
    return Dyadic64{static_cast<std::uint64_t>(units)};
}

ProbValue eval_p(const ProbSpec& spec, std::uint64_t n) {
    if (n < 1) throw InputError("p is defined for n >= 1");
    spec.validate();
    const u128 one = u128{1} << 64;
    auto exact = [&](Rat v) -> ProbValue {
        if (v > 1) v = 1;
        if (v < 0 || v > 1) throw ConfigError("p value outside [0, 1]");
        return {v, SelectionThreshold{dyadic_floor(v, one)}};
    };
    switch (spec.family) {
        case ProbFamily::Constant:
            return exact(spec.params[0]);
        case ProbFamily::Table:
            return exact(n <= spec.params.size() ? spec.params[n - 1] : Rat(0));
        case ProbFamily::TotientRatio:
            return exact(spec.params[0] * Rat(Int(phi_direct(n)), Int(n)));
        case ProbFamily::LogPower: {
            if (spec.params[1] == 0) return exact(spec.params[0]);
            if (n == 1) return spec.params[0] == 0 ? exact(Rat(0)) : exact(Rat(1));
            const u128 units = dyadic_floor_log_power(spec.params[0], spec.params[1], n, one);
            SelectionThreshold thr{units};
            return {thr.to_rat(), thr};
        }
    }
    throw ConfigError("unhandled p family");
}

WeightedSeries::WeightedSeries(const PsiSpec& psi, const ProbSpec& p, std::uint64_t n_max) {
    if (n_max < 1) throw InputError("series needs n_max >= 1");
    prefix_.reserve(n_max + 1);
    prefix_.emplace_back(0);
    Rat acc = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        acc += eval_p(p, n).value * eval_psi(psi, n).to_rat();
        prefix_.push_back(acc);
    }
}

const Rat& WeightedSeries::partial_sum(std::uint64_t n) const {
    if (n >= prefix_.size()) throw InputError("partial sum beyond built range");
    return prefix_[n];
}

Rat WeightedSeries::term(std::uint64_t n) const {
    if (n < 1 || n >= prefix_.size()) throw InputError("term beyond built range");
    return prefix_[n] - prefix_[n - 1];
}

Rat partial_sum(const PsiSpec& psi, const ProbSpec& p, std::uint64_t n) {
    if (n < 1) throw InputError("partial sum needs N >= 1");
    Rat acc = 0;
    for (std::uint64_t k = 1; k <= n; ++k) acc += eval_p(p, k).value * eval_psi(psi, k).to_rat();
    return acc;
}

std::vector<std::uint64_t> sparse_sequence(const PsiSpec& psi, const ProbSpec& p, std::uint64_t t_max,
                                           std::uint64_t n_cap) {
    if (t_max < 1 || n_cap < 1) throw InputError("sparse sequence needs t_max >= 1, n_cap >= 1");
    std::vector<std::uint64_t> checkpoints;
    Rat acc = 0;
    std::uint64_t t = 1;
    for (std::uint64_t n = 1; n <= n_cap && t <= t_max; ++n) {
        acc += eval_p(p, n).value * eval_psi(psi, n).to_rat();
        // terms are at most 1/2 and targets t^2 are 3 apart, so at most one
        // target is crossed per step and the checkpoints strictly increase
        while (t <= t_max && acc >= Rat(Int(t) * Int(t))) {
            checkpoints.push_back(n);
            ++t;
        }
    }
    if (checkpoints.empty())
        throw ConfigError("insufficient divergence: partial sum reached only " + rat_to_decimal(acc) +
                          " by N_cap=" + std::to_string(n_cap));
    return checkpoints;
}

}  // namespace randapprox
