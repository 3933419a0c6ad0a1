#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace randapprox {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using u128 = unsigned __int128;
using i128 = __int128;

// Thrown when a spec/config file is malformed (unknown family, wrong arity,
// value out of the documented domain).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an argument violates an operation precondition.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a request exceeds a configured resource budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw InputError("rational with zero denominator");
    return Rat(num, den);
}

// Floor of a rational as an integer (works for negatives).
inline Int rat_floor(const Rat& r) {
    Int q = rat_num(r) / rat_den(r);
    if (rat_num(r) < 0 && q * rat_den(r) != rat_num(r)) --q;
    return q;
}

// Reduce into [0, 1).
inline Rat rat_mod1(const Rat& r) {
    Rat f = r - Rat(rat_floor(r));
    if (f < 0) f += 1;  // not reachable after floor, kept for clarity of intent
    if (f >= 1) f -= 1;
    return f;
}

// Parses "a" or "a/b" with optional leading '-'. Whitespace is not accepted:
// config values are machine-written strings.
inline Rat parse_rational(std::string_view text) {
    if (text.empty()) throw ConfigError("empty rational literal");
    auto is_int = [](std::string_view s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_int(text)) throw ConfigError("bad rational literal: " + std::string(text));
        return Rat(Int(std::string(text)));
    }
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den) || den[0] == '-')
        throw ConfigError("bad rational literal: " + std::string(text));
    Int d{std::string(den)};
    if (d == 0) throw ConfigError("zero denominator in rational literal: " + std::string(text));
    return Rat(Int(std::string(num)), d);
}

inline std::string rat_to_string(const Rat& r) {
    return rat_num(r).str() + "/" + rat_den(r).str();
}

// Fixed-point decimal rendering, `digits` fractional digits, round half away
// from zero. Deterministic: pure integer arithmetic.
inline std::string rat_to_decimal(const Rat& r, unsigned digits = 12) {
    Int num = rat_num(r);
    Int den = rat_den(r);
    const bool neg = num < 0;
    if (neg) num = -num;
    Int scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Int scaled = num * scale;
    Int q = scaled / den;
    Int rem = scaled % den;
    if (2 * rem >= den) ++q;
    Int ip = q / scale;
    Int fp = q % scale;
    std::string frac = fp.str();
    frac.insert(frac.begin(), digits - frac.size(), '0');
    std::string out = neg && q != 0 ? "-" : "";
    out += ip.str();
    if (digits > 0) out += "." + frac;
    return out;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }
inline long double rat_to_long_double(const Rat& r) { return r.convert_to<long double>(); }

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

inline std::string u128_to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline Int int_from_u128(u128 v) {
    Int hi = static_cast<std::uint64_t>(v >> 64);
    return (hi << 64) | Int(static_cast<std::uint64_t>(v));
}

}  // namespace randapprox
