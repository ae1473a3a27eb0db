#pragma once

// Correctly rounded decimal rendering of exact values: rationals, and signed
// square roots of rationals (skewness and correlation are of that form).
// Ties round away from zero.

#include "umbral/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace umbral {

/// The value sign * sqrt(square), held exactly.
struct SignedSqrt {
    int sign = 0;
    Rational square;

    double to_double() const;
    friend bool operator==(const SignedSqrt&, const SignedSqrt&) = default;
};

namespace detail {

inline mpz_class pow10(unsigned long places) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), 10, places);
    return out;
}

inline mpz_class floor_div(const mpz_class& num, const mpz_class& den) {
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

// Inserts the decimal point into the magnitude `scaled` (already multiplied by 10^places).
inline std::string place_point(const mpz_class& scaled, int places, bool negative) {
    std::string digits = scaled.get_str();
    if (places > 0) {
        if (digits.size() <= static_cast<std::size_t>(places)) {
            digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    const bool all_zero = scaled == 0;
    return (negative && !all_zero ? "-" : "") + digits;
}

}  // namespace detail

/// q rounded to `places` digits after the point.
inline std::string to_fixed(const Rational& q, int places) {
    const mpq_class magnitude = abs(q.value());
    const mpz_class scale = detail::pow10(static_cast<unsigned long>(places));
    const mpz_class numer = magnitude.get_num() * scale;
    const mpz_class& denom = magnitude.get_den();
    mpz_class k = detail::floor_div(numer, denom);
    // round half up on the magnitude: frac >= 1/2  <=>  2*(numer - k*denom) >= denom
    if (2 * (numer - k * denom) >= denom) k += 1;
    return detail::place_point(k, places, q.sign() < 0);
}

/// sign * sqrt(square) rounded to `places` digits after the point.
inline std::string to_fixed(const SignedSqrt& v, int places) {
    if (v.square.sign() < 0) throw std::domain_error("sqrt of a negative rational");
    // x = square * 10^(2p); floor(sqrt(floor(x))) == floor(sqrt(x)).
    const mpz_class scale = detail::pow10(2UL * static_cast<unsigned long>(places));
    const mpz_class numer = v.square.numerator() * scale;
    const mpz_class denom = v.square.denominator();
    const mpz_class fl = detail::floor_div(numer, denom);
    mpz_class k = sqrt(fl);
    // Round up when x >= (k + 1/2)^2, i.e. 4*numer >= (2k+1)^2 * denom.
    const mpz_class twice = 2 * k + 1;
    if (4 * numer >= twice * twice * denom) k += 1;
    return detail::place_point(k, places, v.sign < 0);
}

/// q in d.ddd...e±x form with `significant` digits; "0" for zero.
inline std::string to_scientific(const Rational& q, int significant) {
    if (q.is_zero()) return "0";
    const mpq_class magnitude = abs(q.value());
    // Estimate floor(log10 |q|) from digit counts, then correct.
    long exponent = static_cast<long>(magnitude.get_num().get_str().size()) -
                    static_cast<long>(magnitude.get_den().get_str().size());
    auto scaled_by = [&](long e) {
        mpq_class m = magnitude;
        if (e >= 0) m /= mpq_class(detail::pow10(static_cast<unsigned long>(e)));
        else m *= mpq_class(detail::pow10(static_cast<unsigned long>(-e)));
        return m;
    };
    mpq_class mantissa = scaled_by(exponent);
    while (mantissa >= 10) mantissa = scaled_by(++exponent);
    while (mantissa < 1) mantissa = scaled_by(--exponent);

    std::string digits = to_fixed(Rational(mantissa), significant - 1);
    if (digits.rfind("10", 0) == 0) {
        // rounding carried into a new leading digit
        ++exponent;
        digits = to_fixed(Rational(mpq_class(mantissa / 10)), significant - 1);
    }
    const std::string sign = q.sign() < 0 ? "-" : "";
    const std::string exp_sign = exponent < 0 ? "-" : "+";
    return sign + digits + "e" + exp_sign + std::to_string(std::labs(exponent));
}

inline double SignedSqrt::to_double() const {
    return sign * std::sqrt(square.to_double());
}

}  // namespace umbral
