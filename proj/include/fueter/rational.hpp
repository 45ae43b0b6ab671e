#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fueter {

/// Arbitrary-precision rational scalar used by every exact code path.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p", "p/q", "-p/q" or a decimal literal such as "0.25".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty())
        throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos || s.find_first_of("eE") != std::string::npos) {
        // decimal: scale by a power of ten, exactly
        std::string mant = s;
        long exp10 = 0;
        auto epos = mant.find_first_of("eE");
        if (epos != std::string::npos) {
            exp10 = std::stol(mant.substr(epos + 1));
            mant = mant.substr(0, epos);
        }
        dot = mant.find('.');
        if (dot != std::string::npos) {
            exp10 -= static_cast<long>(mant.size() - dot - 1);
            mant.erase(dot, 1);
        }
        mpz_class m;
        if (m.set_str(mant, 10) != 0)
            throw std::invalid_argument("malformed decimal literal: " + s);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
        Rational r = exp10 >= 0 ? Rational(m * scale) : Rational(m, scale);
        r.canonicalize();
        return r;
    }
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0)
        throw std::invalid_argument("malformed rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Exact square root when both numerator and denominator are perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (sgn(r) < 0)
        return std::nullopt;
    const mpz_class& num = r.get_num();
    const mpz_class& den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class a, b;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
    Rational out(a, b);
    out.canonicalize();
    return out;
}

// Scalar traits shared by the exact and binary64 backends.

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double x) { return x; }

template <class T>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

}  // namespace fueter
