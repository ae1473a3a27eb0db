#pragma once

/**
 * @file umbra.hpp
 * @brief Finite-horizon absorption analysis by umbral evolution.
 *
 * The state of the walk after i rounds is a StateVector: for every transient
 * state, the (sub-probability) generating function of the capital held by
 * walks currently sitting there. One umbra step pushes each state's
 * polynomial along each outgoing edge, scaled by the edge probability and
 * shifted (with clamping) by the edge weight. Mass that lands on an absorbing
 * state is peeled off and recorded per (round, absorbing state); what is left
 * after M rounds is the residual, and its mass is epsilon.
 *
 * Everything is exact, so the bookkeeping identity
 *     sum(absorbed) + epsilon == 1
 * holds as an equality of rationals at every round.
 */

#include "umbral/capped_polynomial.hpp"
#include "umbral/markov_chain.hpp"
#include "umbral/rational.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace umbral {

/// Transient state id -> capital distribution. Absent entries are zero;
/// operations here never store all-zero polynomials.
using StateVector = std::map<std::string, CappedPolynomial>;

inline Rational total_mass(const StateVector& sv) {
    Rational total;
    for (const auto& [id, poly] : sv) total += poly_mass(poly);
    return total;
}

/// Entry-wise sum; polynomials must share a support.
inline StateVector add(const StateVector& a, const StateVector& b) {
    StateVector out = a;
    for (const auto& [id, poly] : b) {
        auto [it, inserted] = out.try_emplace(id, poly);
        if (!inserted) it->second = poly_add(it->second, poly);
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

struct StepResult {
    StateVector next;
    std::map<std::string, CappedPolynomial> absorbed_now;
};

/// One round of evolution. `sv` must only hold transient states of `chain`
/// on the chain's support; the chain itself is assumed to validate.
inline StepResult umbra_step(const WeightedMarkovChain& chain, const StateVector& sv) {
    std::map<std::string, CappedPolynomial> acc;
    for (const auto& [id, poly] : sv) {
        if (!chain.is_transient(id)) throw std::invalid_argument("umbra_step: '" + id + "' is not a transient state");
        if (poly.support() != chain.support()) {
            throw std::invalid_argument("umbra_step: polynomial at '" + id + "' does not use the chain's support");
        }
        if (poly.is_zero()) continue;
        for (auto k : chain.outgoing(id)) {
            const Edge& e = chain.edges()[k];
            auto it = acc.try_emplace(e.dst, CappedPolynomial::zero(chain.support())).first;
            it->second.add_scaled_shifted(poly, e.prob, e.weight);
        }
    }

    StepResult out;
    for (auto& [id, poly] : acc) {
        if (poly.is_zero()) continue;
        if (chain.is_absorbing(id)) out.absorbed_now.emplace(id, std::move(poly));
        else out.next.emplace(id, std::move(poly));
    }
    return out;
}

/// Key of one absorbed cell of R: (round, absorbing state).
using RoundState = std::pair<int, std::string>;

struct AbsorptionRecord {
    std::map<RoundState, CappedPolynomial> absorbed;
    int rounds_run = 0;
    StateVector residual;
    Rational epsilon;
    CapitalSupport support;

    friend bool operator==(const AbsorptionRecord&, const AbsorptionRecord&) = default;
};

/// The evolution loop as an explicit stepper, for callers that need to look
/// at every intermediate round. run_absorption() drives one to completion.
class AbsorptionProcess {
public:
    AbsorptionProcess(const WeightedMarkovChain& chain, const std::string& start, std::int64_t initial_capital = 0)
        : chain_(chain) {
        if (!chain.is_transient(start)) {
            throw std::invalid_argument("run_absorption: start '" + start + "' is not a transient state");
        }
        record_.support = chain.support();
        record_.epsilon = Rational{1};
        record_.residual.emplace(start, CappedPolynomial::monomial(initial_capital, Rational{1}, chain.support()));
    }

    /// Runs one more round and returns the mass absorbed in it.
    Rational advance() {
        auto step = umbra_step(chain_, record_.residual);
        ++record_.rounds_run;
        Rational absorbed_mass;
        for (auto& [id, poly] : step.absorbed_now) {
            absorbed_mass += poly_mass(poly);
            record_.absorbed.emplace(RoundState{record_.rounds_run, id}, std::move(poly));
        }
        record_.residual = std::move(step.next);
        record_.epsilon = total_mass(record_.residual);
        return absorbed_mass;
    }

    const AbsorptionRecord& record() const noexcept { return record_; }
    AbsorptionRecord take() && { return std::move(record_); }

private:
    const WeightedMarkovChain& chain_;
    AbsorptionRecord record_;
};

inline AbsorptionRecord run_absorption(const WeightedMarkovChain& chain, const std::string& start, int rounds,
                                       std::int64_t initial_capital = 0) {
    if (rounds < 1) throw std::invalid_argument("run_absorption: need at least one round");
    AbsorptionProcess process(chain, start, initial_capital);
    for (int i = 0; i < rounds; ++i) process.advance();
    return std::move(process).take();
}

/// Conditions on absorption within the horizon: divides every absorbed
/// polynomial by 1 - epsilon and drops the residual.
inline AbsorptionRecord conditional_record(const AbsorptionRecord& rec) {
    if (rec.epsilon == Rational{1}) {
        throw std::domain_error("conditional_record: nothing was absorbed (epsilon = 1)");
    }
    AbsorptionRecord out;
    out.rounds_run = rec.rounds_run;
    out.support = rec.support;
    const Rational factor = Rational{1} / (Rational{1} - rec.epsilon);
    for (const auto& [key, poly] : rec.absorbed) out.absorbed.emplace(key, poly_scale(poly, factor));
    return out;
}

/// Selects absorbing states; an empty filter selects all of them.
using AbsorbingFilter = std::function<bool(const std::string&)>;

/// R(1, t): capital distribution at absorption summed over rounds.
inline CappedPolynomial marginal_capital(const AbsorptionRecord& rec, const AbsorbingFilter& which = {}) {
    auto out = CappedPolynomial::zero(rec.support);
    for (const auto& [key, poly] : rec.absorbed) {
        if (!which || which(key.second)) out.add_scaled_shifted(poly, Rational{1}, 0);
    }
    return out;
}

/// R(X, 1): absorbed mass per round, over all absorbing states.
inline std::map<int, Rational> marginal_rounds(const AbsorptionRecord& rec) {
    std::map<int, Rational> out;
    for (const auto& [key, poly] : rec.absorbed) out[key.first] += poly_mass(poly);
    return out;
}

}  // namespace umbral
