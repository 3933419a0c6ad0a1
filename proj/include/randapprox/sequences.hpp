#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randapprox/rational.hpp"

namespace randapprox {

// A dyadic rational with 64 fractional bits: value = units / 2^64.
// All psi values are frozen to this form at evaluation time so downstream
// measure arithmetic is exact and platform-reproducible.
struct Dyadic64 {
    std::uint64_t units = 0;

    Rat to_rat() const { return Rat(Int(units), Int(1) << 64); }
    bool operator==(const Dyadic64&) const = default;
};

// Acceptance threshold for the membership oracle: accept iff prf < units.
// units lies in [0, 2^64]; the top value (p = 1) needs the 65th bit.
struct SelectionThreshold {
    u128 units = 0;

    bool accepts(std::uint64_t prf) const { return static_cast<u128>(prf) < units; }
    Rat to_rat() const { return Rat(int_from_u128(units), Int(1) << 64); }
    std::string to_string() const { return u128_to_string(units); }
};

enum class PsiFamily { Constant, Power, LogPower, Table };
enum class ProbFamily { Constant, LogPower, TotientRatio, Table };

const char* family_name(PsiFamily f);
const char* family_name(ProbFamily f);
PsiFamily psi_family_from_name(const std::string& name);
ProbFamily prob_family_from_name(const std::string& name);

// Approximation speed psi: N -> [0, 1/2].
//   Constant  params {c}:        psi(n) = c
//   Power     params {c, e}:     psi(n) = c * n^e   (e rational)
//   LogPower  params {c, g}:     psi(n) = c * (ln n)^{-g}, psi(1) treated
//                                as the clamp value when c > 0
//   Table     params {v_1..v_K}: psi(n) = v_n for n <= K, else 0
// Values are clamped into [0, 1/2] (or [0, 1/4] with clamp_quarter).
struct PsiSpec {
    PsiFamily family = PsiFamily::Constant;
    std::vector<Rat> params;
    bool clamp_quarter = false;

    static PsiSpec constant(Rat c);
    static PsiSpec power(Rat c, Rat exponent);
    static PsiSpec log_power(Rat c, Rat gamma);
    static PsiSpec table(std::vector<Rat> values);

    void validate() const;
    bool operator==(const PsiSpec&) const = default;
};

// Selection probabilities p: N -> [0, 1]. Same families as PsiSpec except
// TotientRatio, params {c}: p_n = min(1, c * phi(n)/n).
struct ProbSpec {
    ProbFamily family = ProbFamily::Constant;
    std::vector<Rat> params;

    static ProbSpec constant(Rat c);
    static ProbSpec log_power(Rat c, Rat gamma);
    static ProbSpec totient_ratio(Rat c = Rat(1));
    static ProbSpec table(std::vector<Rat> values);

    void validate() const;
    bool operator==(const ProbSpec&) const = default;
};

// psi(n) rounded down to 64 fractional bits, clamped. Deterministic: exact
// families go through integer arithmetic, transcendental ones through a
// 113-bit software float.
Dyadic64 eval_psi(const PsiSpec& spec, std::uint64_t n);

struct ProbValue {
    // Exact families report the exact rational; transcendental ones report
    // the dyadic the threshold realizes (threshold/2^64 in both cases differs
    // from `value` by less than 2^-64).
    Rat value;
    SelectionThreshold threshold;
};

ProbValue eval_p(const ProbSpec& spec, std::uint64_t n);

// Exact prefix sums of p_n * psi(n), built once, then read-only.
class WeightedSeries {
public:
    WeightedSeries(const PsiSpec& psi, const ProbSpec& p, std::uint64_t n_max);

    std::uint64_t n_max() const { return prefix_.size() - 1; }
    const Rat& partial_sum(std::uint64_t n) const;
    Rat term(std::uint64_t n) const;

private:
    std::vector<Rat> prefix_;  // prefix_[n] = sum_{k<=n}, prefix_[0] = 0
};

// One-shot exact partial sum Sum_{n<=N} p_n psi(n).
Rat partial_sum(const PsiSpec& psi, const ProbSpec& p, std::uint64_t n);

// Checkpoints N_1 < ... < N_T with N_t the least N whose partial sum
// reaches t^2, scanned up to n_cap and truncated there. Throws ConfigError
// ("insufficient divergence") if the sum never reaches 1.
std::vector<std::uint64_t> sparse_sequence(const PsiSpec& psi, const ProbSpec& p, std::uint64_t t_max,
                                           std::uint64_t n_cap);

}  // namespace randapprox
