#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confmark/error.hpp"

namespace confmark {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline BigInt floor_rat(const Rational& r) { return floor_div(num(r), den(r)); }

// Representative of r mod 1 in [0, 1).
inline Rational mod1(const Rational& r) {
    Rational f = r - Rational(floor_rat(r));
    return f;
}

inline Rational pow_int(const Rational& base, long e) {
    Rational out = 1;
    Rational b = base;
    long k = e >= 0 ? e : -e;
    for (; k > 0; --k) out *= b;
    return e >= 0 ? out : Rational(1) / out;
}

inline BigInt ipow(long base, long e) {
    BigInt out = 1;
    for (long k = 0; k < e; ++k) out *= base;
    return out;
}

// "p/q" or "p"; also accepts a plain decimal integer numerator.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
        require(q != 0, "BadRational", "zero denominator in '" + s + "'");
        return Rational(p, q);
    } catch (const std::runtime_error& e) {
        throw;
    } catch (const std::exception&) {
        fail("BadRational", "cannot parse '" + s + "'");
    }
}

inline std::string to_string(const Rational& r) {
    std::string s = num(r).str();
    if (den(r) != 1) s += "/" + den(r).str();
    return s;
}

// r = p / base^n with gcd(p, base) = 1?  Returns n.
inline std::optional<long> adic_exponent(const Rational& r, long base) {
    BigInt d = den(r);
    long n = 0;
    while (d % base == 0) {
        d /= base;
        ++n;
    }
    return d == 1 ? std::optional<long>(n) : std::nullopt;
}

inline bool is_dyadic_rational(const Rational& r) { return adic_exponent(r, 2).has_value(); }

} // namespace confmark
