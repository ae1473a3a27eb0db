#pragma once

// Exact statistics against a simulation, one row per statistic. Standard
// errors come from the exact distribution, not from the sample.

#include "umbral/simulator.hpp"
#include "umbral/stats.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace umbral {

struct ComparisonRow {
    std::string statistic;
    double exact = 0;
    double empirical = 0;
    double standard_error = 0;
    double z = 0;
    bool gated = true;  // false: shown for information, not part of the verdict
    bool pass = true;
};

struct Comparison {
    std::vector<ComparisonRow> rows;
    double sigmas = 4.0;
    std::int64_t trials = 0;
    std::int64_t censored = 0;
    Rational epsilon;
    bool pass = true;
};

inline Comparison compare(const SummaryStats& exact, const SimulationReport& sim, double sigmas = 4.0) {
    Comparison out;
    out.sigmas = sigmas;
    out.trials = sim.trials;
    out.censored = sim.censored;
    out.epsilon = exact.epsilon;
    const double n = static_cast<double>(sim.completed);

    auto add = [&](std::string name, double ex, double emp, double variance_of_estimator, bool gated = true) {
        ComparisonRow row{std::move(name), ex, emp, std::sqrt(std::max(variance_of_estimator, 0.0)), 0.0, gated, true};
        const double diff = std::abs(emp - ex);
        if (row.standard_error > 0) {
            row.z = (emp - ex) / row.standard_error;
            row.pass = diff <= sigmas * row.standard_error;
        } else {
            row.pass = diff <= 1e-12 * std::max(1.0, std::abs(ex));
        }
        if (gated) out.pass = out.pass && row.pass;
        out.rows.push_back(std::move(row));
    };

    // Var(sample variance) ~ (mu4 - sigma^4) / n for large n.
    auto variance_se2 = [&](const MomentSummary& m) {
        const double var = m.variance.to_double();
        return (m.fourth_central.to_double() - var * var) / n;
    };

    const double p = exact.win_probability.to_double();
    const double win_rate = n > 0 ? static_cast<double>(sim.wins) / n : 0.0;
    add("win probability", p, win_rate, p * (1 - p) / n);
    add("chicks mean", exact.chicks.mean.to_double(), sim.chick_mean, exact.chicks.variance.to_double() / n);
    add("chicks variance", exact.chicks.variance.to_double(), sim.chick_variance, variance_se2(exact.chicks));
    add("rounds mean", exact.rounds.mean.to_double(), sim.rounds_mean, exact.rounds.variance.to_double() / n);
    add("rounds variance", exact.rounds.variance.to_double(), sim.rounds_variance, variance_se2(exact.rounds));
    if (exact.correlation && sim.correlation) {
        // Normal-theory standard error; indicative only for these skewed marginals.
        const double rho = exact.correlation->to_double();
        add("correlation", rho, *sim.correlation, (1 - rho * rho) * (1 - rho * rho) / n, false);
    }
    return out;
}

inline nlohmann::json comparison_to_json(const Comparison& c) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.rows) {
        rows.push_back({{"statistic", r.statistic},
                        {"exact", r.exact},
                        {"empirical", r.empirical},
                        {"standard_error", r.standard_error},
                        {"z", r.z},
                        {"gated", r.gated},
                        {"pass", r.pass}});
    }
    return {{"rows", std::move(rows)},
            {"sigmas", c.sigmas},
            {"trials", c.trials},
            {"censored", c.censored},
            {"epsilon", to_scientific(c.epsilon, 6)},
            {"pass", c.pass}};
}

inline std::string comparison_to_text(const Comparison& c) {
    std::ostringstream os;
    os << std::left << std::setw(18) << "statistic" << std::right << std::setw(16) << "exact" << std::setw(16)
       << "empirical" << std::setw(12) << "std.err" << std::setw(9) << "z" << "  verdict\n";
    os << std::fixed;
    for (const auto& r : c.rows) {
        os << std::left << std::setw(18) << r.statistic << std::right << std::setprecision(8) << std::setw(16) << r.exact
           << std::setw(16) << r.empirical << std::setprecision(6) << std::setw(12) << r.standard_error
           << std::setprecision(2) << std::setw(9) << r.z << "  "
           << (r.gated ? (r.pass ? "PASS" : "FAIL") : (r.pass ? "(info: within)" : "(info: outside)")) << "\n";
    }
    os << "trials " << c.trials << ", censored " << c.censored << ", epsilon " << to_scientific(c.epsilon, 6) << ", band "
       << std::setprecision(1) << c.sigmas << " standard errors: " << (c.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace umbral
