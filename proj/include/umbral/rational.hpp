#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalars.
 *
 * Every probability mass in the engine is a Rational. The value is always
 * kept in lowest terms with a positive denominator, so structural equality
 * is numeric equality. Storage is a GMP mpq, so numerators and denominators
 * grow without bound (the full board at 60 rounds carries denominators near
 * 6^60).
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace umbral {

class Rational {
public:
    Rational() = default;

    // Implicit on purpose: integer literals mix freely with fractions.
    Rational(std::int64_t value) : q_(static_cast<long>(value)) {}  // NOLINT
    Rational(int value) : q_(static_cast<long>(value)) {}           // NOLINT

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("rational: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses "p/q", "p", or "-p/q". Whitespace around the tokens is not accepted.
    static Rational parse(std::string_view text) {
        const auto slash = text.find('/');
        const auto num_text = text.substr(0, slash);
        const auto den_text = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
        return Rational(parse_integer(num_text), parse_integer(den_text));
    }

    const mpq_class& value() const noexcept { return q_; }
    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    int sign() const noexcept { return sgn(q_); }
    bool is_zero() const noexcept { return sign() == 0; }

    /// Presentation only; never feed this back into the engine.
    double to_double() const { return q_.get_d(); }

    /// "p/q", or "p" when the denominator is 1.
    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static mpz_class parse_integer(std::string_view text) {
        std::string_view digits = text;
        if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
        if (digits.empty()) throw std::invalid_argument("rational: malformed number '" + std::string(text) + "'");
        for (char c : digits) {
            if (c < '0' || c > '9') throw std::invalid_argument("rational: malformed number '" + std::string(text) + "'");
        }
        std::string owned(text.front() == '+' ? text.substr(1) : text);
        return mpz_class(owned, 10);
    }

    mpq_class q_{0};
};

/// Builds num/den in lowest terms; throws std::domain_error when den == 0.
inline Rational rat(std::int64_t num, std::int64_t den) {
    return Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
}

/// n^r for a signed integer base.
inline mpz_class integer_power(std::int64_t base, unsigned long exponent) {
    mpz_class out;
    mpz_class b(static_cast<long>(base));
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), exponent);
    return out;
}

inline Rational pow(const Rational& base, unsigned long exponent) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.value().get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.value().get_den_mpz_t(), exponent);
    return Rational(num, den);
}

}  // namespace umbral
