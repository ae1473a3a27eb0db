#pragma once

/**
 * @file capped_polynomial.hpp
 * @brief Distributions of accumulated capital over a clamped integer support.
 *
 * A CappedPolynomial is a generating function in the capital variable t whose
 * exponents live in [support.min, support.max]. Shifting never loses mass:
 * anything pushed past an end of the support piles up on that end. With
 * support [0, N] this is the "no negative chicks, at most N counted" rule.
 */

#include "umbral/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbral {

struct CapitalSupport {
    std::int64_t min = 0;
    std::int64_t max = 0;

    std::int64_t clamp(std::int64_t exponent) const { return std::clamp(exponent, min, max); }
    bool contains(std::int64_t exponent) const { return min <= exponent && exponent <= max; }
    std::size_t width() const { return static_cast<std::size_t>(max - min + 1); }

    friend bool operator==(const CapitalSupport&, const CapitalSupport&) = default;
};

class CappedPolynomial {
public:
    /// All-zero polynomial; throws std::invalid_argument when min > max.
    static CappedPolynomial zero(CapitalSupport support) {
        if (support.min > support.max) {
            throw std::invalid_argument("capped polynomial: inverted support [" + std::to_string(support.min) + ", " +
                                        std::to_string(support.max) + "]");
        }
        return CappedPolynomial(support);
    }

    static CappedPolynomial monomial(std::int64_t exponent, Rational coeff, CapitalSupport support) {
        auto out = zero(support);
        if (!support.contains(exponent)) {
            throw std::out_of_range("capped polynomial: exponent " + std::to_string(exponent) + " outside [" +
                                    std::to_string(support.min) + ", " + std::to_string(support.max) + "]");
        }
        out.coeffs_[out.slot(exponent)] = std::move(coeff);
        return out;
    }

    /// Dense coefficients, index 0 holding exponent support.min.
    static CappedPolynomial from_coefficients(CapitalSupport support, std::vector<Rational> coeffs) {
        auto out = zero(support);
        if (coeffs.size() != support.width()) throw std::invalid_argument("capped polynomial: coefficient count mismatch");
        out.coeffs_ = std::move(coeffs);
        return out;
    }

    const CapitalSupport& support() const noexcept { return support_; }
    std::span<const Rational> coefficients() const noexcept { return coeffs_; }

    /// Coefficient of t^exponent; zero outside the support.
    Rational coefficient(std::int64_t exponent) const {
        return support_.contains(exponent) ? coeffs_[slot(exponent)] : Rational{};
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
    }

    /// Accumulates prob * src shifted by delta (clamped) into this polynomial.
    /// The one mutating operation; the umbra step uses it to scatter mass
    /// without building intermediate polynomials.
    CappedPolynomial& add_scaled_shifted(const CappedPolynomial& src, const Rational& prob, std::int64_t delta) {
        require_same_support(src);
        for (std::size_t i = 0; i < src.coeffs_.size(); ++i) {
            const Rational& c = src.coeffs_[i];
            if (c.is_zero()) continue;
            const std::int64_t target = support_.clamp(support_.min + static_cast<std::int64_t>(i) + delta);
            coeffs_[slot(target)] += c * prob;
        }
        return *this;
    }

    void require_same_support(const CappedPolynomial& other) const {
        if (other.support_ != support_) {
            throw std::invalid_argument("capped polynomial: mismatched support [" + std::to_string(support_.min) + ", " +
                                        std::to_string(support_.max) + "] vs [" + std::to_string(other.support_.min) +
                                        ", " + std::to_string(other.support_.max) + "]");
        }
    }

    friend bool operator==(const CappedPolynomial&, const CappedPolynomial&) = default;

private:
    explicit CappedPolynomial(CapitalSupport support) : support_(support), coeffs_(support.width()) {}

    std::size_t slot(std::int64_t exponent) const { return static_cast<std::size_t>(exponent - support_.min); }

    CapitalSupport support_;
    std::vector<Rational> coeffs_;
};

inline CappedPolynomial poly_zero(std::int64_t support_min, std::int64_t support_max) {
    return CappedPolynomial::zero({support_min, support_max});
}

inline CappedPolynomial poly_monomial(std::int64_t exponent, Rational coeff, CapitalSupport support) {
    return CappedPolynomial::monomial(exponent, std::move(coeff), support);
}

inline CappedPolynomial poly_add(const CappedPolynomial& a, const CappedPolynomial& b) {
    a.require_same_support(b);
    std::vector<Rational> out(a.coefficients().begin(), a.coefficients().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.coefficients()[i];
    return CappedPolynomial::from_coefficients(a.support(), std::move(out));
}

inline CappedPolynomial poly_scale(const CappedPolynomial& a, const Rational& c) {
    std::vector<Rational> out(a.coefficients().begin(), a.coefficients().end());
    for (auto& x : out) x *= c;
    return CappedPolynomial::from_coefficients(a.support(), std::move(out));
}

inline CappedPolynomial poly_shift_clamped(const CappedPolynomial& a, std::int64_t delta) {
    auto out = CappedPolynomial::zero(a.support());
    out.add_scaled_shifted(a, Rational{1}, delta);
    return out;
}

/// Value at t = 1.
inline Rational poly_mass(const CappedPolynomial& a) {
    Rational total;
    for (const auto& c : a.coefficients()) total += c;
    return total;
}

/// Sum over exponents j of j^r * coefficient(j).
inline Rational power_moment(const CappedPolynomial& a, int r) {
    if (r < 0) throw std::invalid_argument("power_moment: negative order " + std::to_string(r));
    mpq_class total = 0;
    const auto coeffs = a.coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        const auto j = a.support().min + static_cast<std::int64_t>(i);
        total += mpq_class(integer_power(j, static_cast<unsigned long>(r))) * coeffs[i].value();
    }
    return Rational(std::move(total));
}

inline CappedPolynomial operator+(const CappedPolynomial& a, const CappedPolynomial& b) { return poly_add(a, b); }
inline CappedPolynomial operator*(const CappedPolynomial& a, const Rational& c) { return poly_scale(a, c); }

/// "1/3 + 2/9*t^3" style rendering with exact coefficients; "0" when empty.
inline std::string to_string(const CappedPolynomial& a) {
    std::string out;
    const auto coeffs = a.coefficients();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        const auto j = a.support().min + static_cast<std::int64_t>(i);
        if (!out.empty()) out += " + ";
        out += coeffs[i].str();
        if (j != 0) out += "*t^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
}

}  // namespace umbral
