#include "bdrd/numeric.hpp"

#include <cmath>
#include <cstdlib>

namespace bdrd {

Nat nat_pow(const Nat& base, unsigned exp) {
    Nat result = 1;
    for (unsigned i = 0; i < exp; ++i) result *= base;
    return result;
}

Rational parse_rational(std::string_view text) {
    auto bad = [&]() {
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    };
    if (text.empty()) bad();

    auto parse_int = [&](std::string_view s) -> Nat {
        if (s.empty()) bad();
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
            if (s.size() == 1) bad();
        }
        Nat v = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') bad();
            v = v * 10 + (s[i] - '0');
        }
        return neg ? Nat(-v) : v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Nat num = parse_int(text.substr(0, slash));
        Nat den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (frac.empty()) bad();
        Nat num = parse_int(std::string(whole.empty() ? "0" : whole) + std::string(frac));
        Nat den = nat_pow(10, static_cast<unsigned>(frac.size()));
        return Rational(num, den);
    }
    return Rational(parse_int(text));
}

std::string rational_to_string(const Rational& q) {
    Nat num = boost::multiprecision::numerator(q);
    Nat den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Nat ceil_times_ln(const Rational& q, unsigned long x) {
    if (q <= 0 || x <= 1) return 0;
    long double qd = q.convert_to<long double>();
    long double product = qd * std::log(static_cast<long double>(x));
    // Bump by a few ulps so we never land below the true bound.
    long double padded = product * (1.0L + 1e-15L);
    Nat result = static_cast<long long>(std::ceil(padded));
    if (result < 1) result = 1;
    return result;
}

}  // namespace bdrd
