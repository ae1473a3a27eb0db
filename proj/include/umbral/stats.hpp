#pragma once

/**
 * @file stats.hpp
 * @brief Summary statistics of an absorption record.
 *
 * Every statistic is exact. Means, variances, covariance and kurtosis are
 * rationals; skewness and correlation are signed square roots of rationals.
 * Floating point only appears when rendering.
 */

#include "umbral/decimal.hpp"
#include "umbral/umbra.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace umbral {

/// Mean and central moments 2..4 of one marginal distribution.
struct MomentSummary {
    Rational mean;
    Rational variance;
    Rational third_central;
    Rational fourth_central;

    /// From raw moments mu[0..4] (mu[0] is total mass, assumed 1).
    static MomentSummary from_raw(const Rational (&mu)[5]) {
        const Rational& m1 = mu[1];
        const Rational m1_2 = m1 * m1;
        MomentSummary out;
        out.mean = m1;
        out.variance = mu[2] - m1_2;
        out.third_central = mu[3] - 3 * m1 * mu[2] + 2 * m1_2 * m1;
        out.fourth_central = mu[4] - 4 * m1 * mu[3] + 6 * m1_2 * mu[2] - 3 * m1_2 * m1_2;
        return out;
    }

    std::optional<SignedSqrt> skewness() const {
        if (variance.is_zero()) return std::nullopt;
        return SignedSqrt{third_central.sign(), third_central * third_central / pow(variance, 3)};
    }

    /// Standardized fourth central moment, without subtracting 3.
    std::optional<Rational> kurtosis_raw() const {
        if (variance.is_zero()) return std::nullopt;
        return fourth_central / (variance * variance);
    }

    std::optional<Rational> kurtosis_excess() const {
        auto raw = kurtosis_raw();
        if (!raw) return std::nullopt;
        return *raw - 3;
    }
};

struct SummaryStats {
    Rational win_probability;
    MomentSummary chicks;  // capital at absorption
    MomentSummary rounds;  // rounds to absorption
    Rational covariance;   // Cov(rounds, capital)
    std::optional<SignedSqrt> correlation;
    std::map<std::string, Rational> absorption;  // per absorbing state, conditional
    Rational epsilon;                            // before conditioning
    int rounds_run = 0;
    std::int64_t win_threshold = 0;
};

/// Statistics of `rec` conditioned on absorption within the horizon. A record
/// with epsilon > 0 is conditioned here; its epsilon is kept for reporting.
/// `win_threshold` is the capital that counts as a win (N for the game).
inline SummaryStats summarize(const AbsorptionRecord& rec, std::int64_t win_threshold) {
    const AbsorptionRecord cond = rec.epsilon.is_zero() ? rec : conditional_record(rec);

    SummaryStats out;
    out.epsilon = rec.epsilon;
    out.rounds_run = rec.rounds_run;
    out.win_threshold = win_threshold;

    const CappedPolynomial capital = marginal_capital(cond);
    out.win_probability = capital.coefficient(win_threshold);

    Rational chick_mu[5];
    for (int r = 0; r < 5; ++r) chick_mu[r] = power_moment(capital, r);
    out.chicks = MomentSummary::from_raw(chick_mu);

    Rational round_mu[5];
    Rational cross;
    for (const auto& [key, poly] : cond.absorbed) {
        const Rational mass = poly_mass(poly);
        const Rational m(static_cast<std::int64_t>(key.first));
        Rational power{1};
        for (int r = 0; r < 5; ++r) {
            round_mu[r] += power * mass;
            power *= m;
        }
        cross += m * power_moment(poly, 1);
        out.absorption[key.second] += mass;
    }
    out.rounds = MomentSummary::from_raw(round_mu);

    out.covariance = cross - out.rounds.mean * out.chicks.mean;
    if (!out.rounds.variance.is_zero() && !out.chicks.variance.is_zero()) {
        out.correlation = SignedSqrt{out.covariance.sign(),
                                     out.covariance * out.covariance / (out.rounds.variance * out.chicks.variance)};
    }
    return out;
}

enum class ReportFormat { text, json };

namespace detail {

inline nlohmann::json exact_json(const Rational& q, int digits) {
    return {{"decimal", to_fixed(q, digits)}, {"fraction", q.str()}};
}

inline nlohmann::json optional_json(const std::optional<Rational>& q, int digits) {
    return q ? exact_json(*q, digits) : nlohmann::json(nullptr);
}

inline nlohmann::json optional_json(const std::optional<SignedSqrt>& v, int digits) {
    return v ? nlohmann::json(to_fixed(*v, digits)) : nlohmann::json(nullptr);
}

inline nlohmann::json moments_json(const MomentSummary& m, int digits) {
    return {{"mean", exact_json(m.mean, digits)},
            {"variance", exact_json(m.variance, digits)},
            {"skewness", optional_json(m.skewness(), digits)},
            {"kurtosis_raw", optional_json(m.kurtosis_raw(), digits)},
            {"kurtosis_excess", optional_json(m.kurtosis_excess(), digits)}};
}

inline std::string or_absent(const std::optional<SignedSqrt>& v, int digits) {
    return v ? to_fixed(*v, digits) : "absent";
}

inline std::string or_absent(const std::optional<Rational>& v, int digits) {
    return v ? to_fixed(*v, digits) : "absent";
}

}  // namespace detail

inline nlohmann::json stats_to_json(const SummaryStats& s, int digits) {
    nlohmann::json absorption = nlohmann::json::object();
    for (const auto& [id, mass] : s.absorption) absorption[id] = detail::exact_json(mass, digits);
    return {
        {"win_probability", detail::exact_json(s.win_probability, digits)},
        {"chicks", detail::moments_json(s.chicks, digits)},
        {"rounds", detail::moments_json(s.rounds, digits)},
        {"covariance", detail::exact_json(s.covariance, digits)},
        {"correlation", detail::optional_json(s.correlation, digits)},
        {"absorption", std::move(absorption)},
        {"epsilon", {{"decimal", to_scientific(s.epsilon, digits)}, {"fraction", s.epsilon.str()}}},
        {"M", s.rounds_run},
        {"win_threshold", s.win_threshold},
    };
}

/// Human-readable or JSON report; decimals are correctly rounded to `digits` places.
inline std::string render_stats(const SummaryStats& s, int digits, ReportFormat format = ReportFormat::text) {
    if (digits < 1) throw std::invalid_argument("render_stats: digits must be >= 1");
    if (format == ReportFormat::json) return stats_to_json(s, digits).dump(2) + "\n";

    std::ostringstream os;
    auto line = [&](const std::string& label, const std::string& value) {
        os << label << std::string(label.size() < 26 ? 26 - label.size() : 1, ' ') << value << "\n";
    };
    line("rounds (M)", std::to_string(s.rounds_run));
    line("epsilon", to_scientific(s.epsilon, digits));
    line("win probability", to_fixed(s.win_probability, digits));
    line("chicks mean", to_fixed(s.chicks.mean, digits));
    line("chicks variance", to_fixed(s.chicks.variance, digits));
    line("chicks skewness", detail::or_absent(s.chicks.skewness(), digits));
    line("chicks kurtosis (raw)", detail::or_absent(s.chicks.kurtosis_raw(), digits));
    line("chicks kurtosis (excess)", detail::or_absent(s.chicks.kurtosis_excess(), digits));
    line("rounds mean", to_fixed(s.rounds.mean, digits));
    line("rounds variance", to_fixed(s.rounds.variance, digits));
    line("covariance", to_fixed(s.covariance, digits));
    line("correlation", detail::or_absent(s.correlation, digits));
    if (s.absorption.size() > 1) {
        for (const auto& [id, mass] : s.absorption) line("absorbed at " + id, to_fixed(mass, digits));
    }
    return os.str();
}

/// Every (round, absorbing state) polynomial of R with exact coefficients.
inline nlohmann::json record_to_json(const AbsorptionRecord& rec) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [key, poly] : rec.absorbed) {
        nlohmann::json coeffs = nlohmann::json::object();
        const auto c = poly.coefficients();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_zero()) coeffs[std::to_string(poly.support().min + static_cast<std::int64_t>(i))] = c[i].str();
        }
        cells.push_back({{"round", key.first}, {"state", key.second}, {"coefficients", std::move(coeffs)}});
    }
    return {{"M", rec.rounds_run},
            {"support", {{"min", rec.support.min}, {"max", rec.support.max}}},
            {"epsilon", rec.epsilon.str()},
            {"absorbed", std::move(cells)}};
}

inline std::string record_to_text(const AbsorptionRecord& rec) {
    std::ostringstream os;
    os << "R(X,t) over " << rec.rounds_run << " rounds (" << rec.absorbed.size() << " cells), epsilon = "
       << rec.epsilon.str() << "\n";
    for (const auto& [key, poly] : rec.absorbed) {
        os << "X^" << key.first << " @" << key.second << ": " << to_string(poly) << "\n";
    }
    return os.str();
}

}  // namespace umbral
