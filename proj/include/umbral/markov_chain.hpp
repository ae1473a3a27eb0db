#pragma once

/**
 * @file markov_chain.hpp
 * @brief Weighted discrete-time Markov chains with absorbing states.
 *
 * Each edge carries an exact transition probability and an integer weight,
 * the capital paid (or earned) every time the edge is used. Absorbing states
 * have no outgoing edges. A chain can be constructed in an invalid state;
 * validate_chain() reports what is wrong as data.
 */

#include "umbral/capped_polynomial.hpp"
#include "umbral/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace umbral {

struct Edge {
    std::string src;
    std::string dst;
    Rational prob;
    std::int64_t weight = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct ChainViolation {
    std::string subject;  // state id or "edge #k"
    std::string rule;

    std::string str() const { return subject + ": " + rule; }
};

class WeightedMarkovChain {
public:
    WeightedMarkovChain(std::vector<std::string> transient, std::vector<std::string> absorbing, std::vector<Edge> edges,
                        CapitalSupport support)
        : transient_(std::move(transient)),
          absorbing_(std::move(absorbing)),
          edges_(std::move(edges)),
          support_(support) {
        for (const auto& id : transient_) kind_.try_emplace(id, Kind::transient);
        for (const auto& id : absorbing_) kind_.try_emplace(id, Kind::absorbing);
        for (std::size_t k = 0; k < edges_.size(); ++k) outgoing_[edges_[k].src].push_back(k);
    }

    const std::vector<std::string>& transient_states() const noexcept { return transient_; }
    const std::vector<std::string>& absorbing_states() const noexcept { return absorbing_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const CapitalSupport& support() const noexcept { return support_; }

    bool is_transient(const std::string& id) const { return kind_of(id) == Kind::transient; }
    bool is_absorbing(const std::string& id) const { return kind_of(id) == Kind::absorbing; }
    bool is_declared(const std::string& id) const { return kind_.contains(id); }

    /// Indices into edges() of the edges leaving `id`.
    const std::vector<std::size_t>& outgoing(const std::string& id) const {
        static const std::vector<std::size_t> none;
        const auto it = outgoing_.find(id);
        return it == outgoing_.end() ? none : it->second;
    }

    friend bool operator==(const WeightedMarkovChain& a, const WeightedMarkovChain& b) {
        return a.transient_ == b.transient_ && a.absorbing_ == b.absorbing_ && a.edges_ == b.edges_ &&
               a.support_ == b.support_;
    }

private:
    enum class Kind { transient, absorbing, undeclared };

    Kind kind_of(const std::string& id) const {
        const auto it = kind_.find(id);
        return it == kind_.end() ? Kind::undeclared : it->second;
    }

    std::vector<std::string> transient_;
    std::vector<std::string> absorbing_;
    std::vector<Edge> edges_;
    CapitalSupport support_;
    std::unordered_map<std::string, Kind> kind_;
    std::unordered_map<std::string, std::vector<std::size_t>> outgoing_;
};

/// Empty iff the chain is well formed.
inline std::vector<ChainViolation> validate_chain(const WeightedMarkovChain& chain) {
    std::vector<ChainViolation> out;
    const auto& support = chain.support();
    if (support.min > support.max) {
        out.push_back({"support", "min " + std::to_string(support.min) + " exceeds max " + std::to_string(support.max)});
    }

    std::set<std::string> seen;
    auto check_unique = [&](const std::vector<std::string>& ids) {
        for (const auto& id : ids) {
            if (!seen.insert(id).second) out.push_back({id, "declared more than once"});
        }
    };
    check_unique(chain.transient_states());
    check_unique(chain.absorbing_states());

    const auto& edges = chain.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        const std::string subject = "edge #" + std::to_string(k) + " (" + e.src + " -> " + e.dst + ")";
        if (!chain.is_declared(e.src)) out.push_back({subject, "source is not a declared state"});
        else if (chain.is_absorbing(e.src)) out.push_back({subject, "absorbing state has an outgoing edge"});
        if (!chain.is_declared(e.dst)) out.push_back({subject, "destination is not a declared state"});
        if (e.prob.sign() <= 0) out.push_back({subject, "probability " + e.prob.str() + " is not positive"});
    }

    for (const auto& id : chain.transient_states()) {
        Rational total;
        for (auto k : chain.outgoing(id)) total += edges[k].prob;
        if (total != Rational{1}) out.push_back({id, "outgoing probabilities sum to " + total.str() + ", not 1"});
    }
    return out;
}

/// A chain plus where the walk begins; the unit of chain-file I/O.
struct ChainDocument {
    WeightedMarkovChain chain;
    std::string start;
    std::int64_t initial_capital = 0;
};

class ChainFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::json chain_to_json(const ChainDocument& doc) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : doc.chain.edges()) {
        edges.push_back({{"src", e.src}, {"dst", e.dst}, {"prob", e.prob.str()}, {"weight", e.weight}});
    }
    return {
        {"transient", doc.chain.transient_states()},
        {"absorbing", doc.chain.absorbing_states()},
        {"edges", std::move(edges)},
        {"support", {{"min", doc.chain.support().min}, {"max", doc.chain.support().max}}},
        {"start", doc.start},
        {"initial_capital", doc.initial_capital},
    };
}

/// Structural decode only; call validate_chain() for the semantic rules.
/// `start` defaults to the first transient state, `initial_capital` to 0.
inline ChainDocument chain_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw ChainFormatError("chain: top level must be an object");
        for (const char* field : {"transient", "absorbing", "edges", "support"}) {
            if (!j.contains(field)) throw ChainFormatError(std::string("chain: missing field '") + field + "'");
        }
        auto transient = j.at("transient").get<std::vector<std::string>>();
        auto absorbing = j.at("absorbing").get<std::vector<std::string>>();
        std::vector<Edge> edges;
        std::size_t k = 0;
        for (const auto& e : j.at("edges")) {
            const auto& prob = e.at("prob");
            Rational p;
            try {
                p = prob.is_string() ? Rational::parse(prob.get<std::string>()) : Rational(prob.get<std::int64_t>());
            } catch (const std::exception& ex) {
                throw ChainFormatError("chain: edge #" + std::to_string(k) + " prob: " + ex.what());
            }
            edges.push_back({e.at("src").get<std::string>(), e.at("dst").get<std::string>(), std::move(p),
                             e.value("weight", std::int64_t{0})});
            ++k;
        }
        const CapitalSupport support{j.at("support").at("min").get<std::int64_t>(),
                                     j.at("support").at("max").get<std::int64_t>()};
        std::string start = j.value("start", std::string{});
        if (start.empty()) {
            if (transient.empty()) throw ChainFormatError("chain: no transient states");
            start = transient.front();
        }
        const auto initial = j.value("initial_capital", std::int64_t{0});
        return {WeightedMarkovChain(std::move(transient), std::move(absorbing), std::move(edges), support),
                std::move(start), initial};
    } catch (const nlohmann::json::exception& ex) {
        throw ChainFormatError(std::string("chain: ") + ex.what());
    }
}

}  // namespace umbral
