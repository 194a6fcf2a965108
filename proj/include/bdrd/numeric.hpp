#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bdrd {

// All threshold arithmetic is exact: proximity cutoffs like f and mu are
// sharp, so floating point must never decide accept/reject.
using Nat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Nat rational_floor(const Rational& q) {
    Nat num = boost::multiprecision::numerator(q);
    Nat den = boost::multiprecision::denominator(q);
    Nat d = num / den;
    if (num < 0 && num % den != 0) --d;
    return d;
}

inline Nat rational_ceil(const Rational& q) {
    Nat num = boost::multiprecision::numerator(q);
    Nat den = boost::multiprecision::denominator(q);
    Nat d = num / den;
    if (num > 0 && num % den != 0) ++d;
    return d;
}

/// Nearest integer, ties rounded half up (pinned so outputs are deterministic).
inline Nat round_half_up(const Rational& q) {
    return rational_floor(q + Rational(1, 2));
}

Nat nat_pow(const Nat& base, unsigned exp);

/// Parses "p/q", "p", or a plain decimal like "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

std::string rational_to_string(const Rational& q);

/// Smallest integer >= q * ln(x). Uses long double internally; the result is
/// clamped to be >= the true bound by a conservative error margin.
Nat ceil_times_ln(const Rational& q, unsigned long x);

}  // namespace bdrd
