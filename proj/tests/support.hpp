#pragma once

// Test-only oracles and generators. The enumeration oracles walk every
// outcome sequence explicitly and never touch umbra_step, CappedPolynomial
// shifting, or compile_game, so agreement with the engine is evidence.

#include "umbral/game.hpp"
#include "umbral/markov_chain.hpp"
#include "umbral/umbra.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace umbral::testing {

/// (round, absorbing state) -> exponent -> mass, plus the survivors.
struct CellMap {
    std::map<std::pair<int, std::string>, std::map<std::int64_t, Rational>> absorbed;
    std::map<std::string, std::map<std::int64_t, Rational>> residual;

    friend bool operator==(const CellMap&, const CellMap&) = default;
};

inline std::map<std::int64_t, Rational> nonzero_cells(const CappedPolynomial& p) {
    std::map<std::int64_t, Rational> out;
    const auto c = p.coefficients();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_zero()) out[p.support().min + static_cast<std::int64_t>(i)] = c[i];
    }
    return out;
}

inline CellMap cells_of(const AbsorptionRecord& rec) {
    CellMap out;
    for (const auto& [key, poly] : rec.absorbed) {
        auto cells = nonzero_cells(poly);
        if (!cells.empty()) out.absorbed[key] = std::move(cells);
    }
    for (const auto& [id, poly] : rec.residual) {
        auto cells = nonzero_cells(poly);
        if (!cells.empty()) out.residual[id] = std::move(cells);
    }
    return out;
}

/// Enumerates every edge sequence of length <= rounds from `start`.
inline CellMap enumerate_chain(const WeightedMarkovChain& chain, const std::string& start, std::int64_t capital,
                               int rounds) {
    CellMap out;
    const auto lo = chain.support().min;
    const auto hi = chain.support().max;
    const auto& absorbing = chain.absorbing_states();

    auto walk = [&](auto&& self, const std::string& state, std::int64_t cap, const Rational& prob, int round) -> void {
        if (std::find(absorbing.begin(), absorbing.end(), state) != absorbing.end()) {
            out.absorbed[{round, state}][cap] += prob;
            return;
        }
        if (round == rounds) {
            out.residual[state][cap] += prob;
            return;
        }
        for (const auto& e : chain.edges()) {
            if (e.src != state) continue;
            const std::int64_t next = std::min(std::max(cap + e.weight, lo), hi);
            self(self, e.dst, next, prob * e.prob, round + 1);
        }
    };
    walk(walk, start, capital, Rational{1}, 0);
    return out;
}

/// Enumerates every spinner sequence of length <= rounds straight from the
/// game rules. Absorbed cells are keyed by the terminal square number.
inline CellMap enumerate_game(const GameSpec& spec, int rounds) {
    CellMap out;
    const int outcomes = spec.animal_count() + 1;
    const Rational each = rat(1, outcomes);
    const int terminal = static_cast<int>(spec.squares.size());
    const std::int64_t cap_max = spec.win_threshold;

    auto walk = [&](auto&& self, int square, std::int64_t chicks, const Rational& prob, int round) -> void {
        if (square == terminal) {
            out.absorbed[{round, std::to_string(terminal)}][chicks] += prob;
            return;
        }
        if (round == rounds) {
            out.residual[std::to_string(square)][chicks] += prob;
            return;
        }
        for (int o = 0; o < outcomes; ++o) {
            const Rational p = prob * each;
            if (o == outcomes - 1) {  // fox
                self(self, square, chicks > 0 ? chicks - 1 : 0, p, round + 1);
                continue;
            }
            const std::string& animal = spec.animals[static_cast<std::size_t>(o)];
            int j = square + 1;
            for (; j < terminal; ++j) {
                const Square& sq = spec.squares[static_cast<std::size_t>(j - 1)];
                if (sq.kind == SquareKind::animal && sq.animal == animal) break;
            }
            std::int64_t gained = j - square;
            if (spec.blue.count(j)) gained += 1;
            self(self, j, std::min(chicks + gained, cap_max), p, round + 1);
        }
    };
    walk(walk, 1, 0, Rational{1}, 0);
    return out;
}

/// A valid random chain with at most `max_states` states, at least one
/// absorbing, 1-3 edges per transient state (parallel edges allowed),
/// weights in [-3, 3] and a support containing 0.
inline ChainDocument random_chain(std::mt19937& rng, int max_states = 5) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n_transient = uniform(1, max_states - 1);
    const int n_absorbing = uniform(1, max_states - n_transient);

    std::vector<std::string> transient, absorbing, all;
    for (int i = 0; i < n_transient; ++i) transient.push_back("s" + std::to_string(i));
    for (int i = 0; i < n_absorbing; ++i) absorbing.push_back("a" + std::to_string(i));
    all = transient;
    all.insert(all.end(), absorbing.begin(), absorbing.end());

    std::vector<Edge> edges;
    for (const auto& src : transient) {
        const int degree = uniform(1, 3);
        std::vector<int> raw(static_cast<std::size_t>(degree));
        int total = 0;
        for (auto& r : raw) total += (r = uniform(1, 6));
        for (int k = 0; k < degree; ++k) {
            const auto& dst = all[static_cast<std::size_t>(uniform(0, static_cast<int>(all.size()) - 1))];
            edges.push_back({src, dst, rat(raw[static_cast<std::size_t>(k)], total), uniform(-3, 3)});
        }
    }
    const int lo = uniform(-3, 0);
    const int hi = uniform(0, 6);
    return {WeightedMarkovChain(transient, absorbing, std::move(edges), CapitalSupport{lo, hi}), transient.front(), 0};
}

/// Random polynomial on `support` with small non-negative coefficients.
inline CappedPolynomial random_poly(std::mt19937& rng, CapitalSupport support, bool interior_only = false) {
    std::vector<Rational> coeffs(support.width());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const bool edge = i == 0 || i + 1 == coeffs.size();
        if (interior_only && edge) continue;
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
        coeffs[i] = rat(std::uniform_int_distribution<int>(0, 9)(rng), std::uniform_int_distribution<int>(1, 12)(rng));
    }
    return CappedPolynomial::from_coefficients(support, std::move(coeffs));
}

/// A StateVector over the chain's transient states with random sub-unit mass.
inline StateVector random_state_vector(std::mt19937& rng, const WeightedMarkovChain& chain) {
    StateVector sv;
    for (const auto& id : chain.transient_states()) {
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) continue;
        auto p = random_poly(rng, chain.support());
        if (!p.is_zero()) sv.emplace(id, std::move(p));
    }
    const Rational mass = total_mass(sv);
    if (mass > Rational{1}) {
        for (auto& [id, p] : sv) p = poly_scale(p, Rational{1} / mass);
    }
    return sv;
}

}  // namespace umbral::testing
