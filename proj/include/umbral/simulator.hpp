#pragma once

/**
 * @file simulator.hpp
 * @brief Seeded Monte Carlo play, used as an independent check on the exact engine.
 *
 * Game play follows the board rules directly (it does not go through
 * compile_game). Randomness: each worker w runs std::mt19937_64 seeded with
 * std::seed_seq{seed_lo32, seed_hi32, w}; spins are drawn by rejection
 * sampling, never by std::uniform_int_distribution, whose output is
 * implementation-defined. Worker w plays trials [w*T/W, (w+1)*T/W). All
 * accumulators are integers, so reports are bit-identical for a fixed
 * (seed, trials, workers) on any platform.
 */

#include "umbral/game.hpp"
#include "umbral/markov_chain.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace umbral {

struct PlayOutcome {
    std::int64_t rounds = 0;
    std::int64_t chicks = 0;
    bool censored = false;  // hit the round cap before reaching the terminal
};

/// Uniform integers in [0, n) from a 64-bit engine, by rejection.
class UniformIndex {
public:
    explicit UniformIndex(std::uint64_t n) : n_(n), threshold_((0 - n) % n) {
        if (n == 0) throw std::invalid_argument("UniformIndex: empty range");
    }

    template <class Engine>
    std::uint64_t operator()(Engine& eng) const {
        for (;;) {
            const std::uint64_t x = eng();
            if (x >= threshold_) return x % n_;
        }
    }

private:
    std::uint64_t n_;
    std::uint64_t threshold_;
};

inline std::mt19937_64 worker_engine(std::uint64_t seed, std::uint32_t worker) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffU), static_cast<std::uint32_t>(seed >> 32), worker};
    return std::mt19937_64(seq);
}

/// Plays one game. `spin()` yields an outcome in [0, K]: values below K pick
/// spec.animals[value], K is the fox.
template <class Spin>
PlayOutcome play_once(const GameSpec& spec, Spin&& spin, std::int64_t round_cap) {
    const int fox = spec.animal_count();
    const int n = spec.win_threshold;
    int square = 1;
    PlayOutcome out;
    while (square != spec.terminal()) {
        if (out.rounds == round_cap) {
            out.censored = true;
            return out;
        }
        ++out.rounds;
        const int outcome = static_cast<int>(spin());
        if (outcome == fox) {
            out.chicks = std::max<std::int64_t>(out.chicks - 1, 0);
            continue;
        }
        const std::string& animal = spec.animals.at(static_cast<std::size_t>(outcome));
        int j = square + 1;
        while (j < spec.terminal() && !(spec.at(j).kind == SquareKind::animal && spec.at(j).animal == animal)) ++j;
        const int gained = (j - square) + (spec.blue.contains(j) ? 1 : 0);
        out.chicks = std::min<std::int64_t>(out.chicks + gained, n);
        square = j;
    }
    return out;
}

/// Walks a chain once; capital is clamped to the chain's support.
template <class Engine>
PlayOutcome play_chain_once(const ChainDocument& doc, Engine& eng, std::int64_t round_cap, std::string* absorbed_at = nullptr) {
    const auto& chain = doc.chain;
    std::string state = doc.start;
    PlayOutcome out;
    out.chicks = doc.initial_capital;
    while (!chain.is_absorbing(state)) {
        if (out.rounds == round_cap) {
            out.censored = true;
            return out;
        }
        ++out.rounds;
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        const auto& outgoing = chain.outgoing(state);
        double acc = 0.0;
        const Edge* chosen = &chain.edges()[outgoing.back()];
        for (auto k : outgoing) {
            acc += chain.edges()[k].prob.to_double();
            if (u < acc) {
                chosen = &chain.edges()[k];
                break;
            }
        }
        out.chicks = chain.support().clamp(out.chicks + chosen->weight);
        state = chosen->dst;
    }
    if (absorbed_at) *absorbed_at = state;
    return out;
}

struct SimulationReport {
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::int64_t round_cap = 0;
    std::int64_t win_threshold = 0;

    std::int64_t completed = 0;  // trials - censored; moments use these only
    std::int64_t censored = 0;
    std::int64_t wins = 0;

    double chick_mean = 0, chick_variance = 0;
    double rounds_mean = 0, rounds_variance = 0;
    std::optional<double> correlation;

    std::map<std::int64_t, std::int64_t> chick_histogram;
    std::map<std::int64_t, std::int64_t> rounds_histogram;

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

namespace detail {

struct Tally {
    std::int64_t completed = 0, censored = 0;
    std::int64_t sum_x = 0, sum_xx = 0, sum_y = 0, sum_yy = 0, sum_xy = 0;  // x = chicks, y = rounds
    std::map<std::int64_t, std::int64_t> chicks, rounds;

    void add(const PlayOutcome& o) {
        if (o.censored) {
            ++censored;
            return;
        }
        ++completed;
        sum_x += o.chicks;
        sum_xx += o.chicks * o.chicks;
        sum_y += o.rounds;
        sum_yy += o.rounds * o.rounds;
        sum_xy += o.chicks * o.rounds;
        ++chicks[o.chicks];
        ++rounds[o.rounds];
    }

    void merge(const Tally& o) {
        completed += o.completed;
        censored += o.censored;
        sum_x += o.sum_x;
        sum_xx += o.sum_xx;
        sum_y += o.sum_y;
        sum_yy += o.sum_yy;
        sum_xy += o.sum_xy;
        for (const auto& [k, v] : o.chicks) chicks[k] += v;
        for (const auto& [k, v] : o.rounds) rounds[k] += v;
    }
};

// PlayFn: (std::mt19937_64&) -> PlayOutcome
template <class PlayFn>
SimulationReport run_trials(std::int64_t trials, std::uint64_t seed, int workers, std::int64_t round_cap,
                            std::int64_t win_threshold, const PlayFn& play) {
    if (trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
    if (workers < 1) throw std::invalid_argument("simulate: workers must be >= 1");
    if (round_cap < 1) throw std::invalid_argument("simulate: round cap must be >= 1");

    std::vector<Tally> tallies(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
        auto eng = worker_engine(seed, static_cast<std::uint32_t>(w));
        const std::int64_t begin = trials * w / workers;
        const std::int64_t end = trials * (w + 1) / workers;
        auto& tally = tallies[static_cast<std::size_t>(w)];
        for (std::int64_t i = begin; i < end; ++i) tally.add(play(eng));
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }

    Tally total;
    for (const auto& t : tallies) total.merge(t);

    SimulationReport r;
    r.trials = trials;
    r.seed = seed;
    r.workers = workers;
    r.round_cap = round_cap;
    r.win_threshold = win_threshold;
    r.completed = total.completed;
    r.censored = total.censored;
    r.chick_histogram = std::move(total.chicks);
    r.rounds_histogram = std::move(total.rounds);
    if (auto it = r.chick_histogram.find(win_threshold); it != r.chick_histogram.end()) r.wins = it->second;

    const double n = static_cast<double>(total.completed);
    if (total.completed > 0) {
        r.chick_mean = static_cast<double>(total.sum_x) / n;
        r.rounds_mean = static_cast<double>(total.sum_y) / n;
    }
    if (total.completed > 1) {
        // Sample (n - 1) normalization, from exact integer sums.
        const double sxx = static_cast<double>(total.sum_xx) - static_cast<double>(total.sum_x) * r.chick_mean;
        const double syy = static_cast<double>(total.sum_yy) - static_cast<double>(total.sum_y) * r.rounds_mean;
        const double sxy = static_cast<double>(total.sum_xy) - static_cast<double>(total.sum_x) * r.rounds_mean;
        r.chick_variance = sxx / (n - 1);
        r.rounds_variance = syy / (n - 1);
        if (sxx > 0 && syy > 0) r.correlation = sxy / std::sqrt(sxx * syy);
    }
    return r;
}

}  // namespace detail

inline SimulationReport simulate(const GameSpec& spec, std::int64_t trials, std::uint64_t seed, std::int64_t round_cap,
                                 int workers = 1) {
    const UniformIndex spinner(static_cast<std::uint64_t>(spec.animal_count()) + 1);
    return detail::run_trials(trials, seed, workers, round_cap, spec.win_threshold, [&](std::mt19937_64& eng) {
        return play_once(spec, [&] { return spinner(eng); }, round_cap);
    });
}

inline SimulationReport simulate_chain(const ChainDocument& doc, std::int64_t trials, std::uint64_t seed,
                                       std::int64_t round_cap, int workers = 1) {
    if (!doc.chain.is_transient(doc.start)) throw std::invalid_argument("simulate: start is not a transient state");
    return detail::run_trials(trials, seed, workers, round_cap, doc.chain.support().max,
                              [&](std::mt19937_64& eng) { return play_chain_once(doc, eng, round_cap); });
}

inline nlohmann::json report_to_json(const SimulationReport& r) {
    auto histogram = [](const std::map<std::int64_t, std::int64_t>& h) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [value, count] : h) out.push_back({value, count});
        return out;
    };
    return {
        {"trials", r.trials},
        {"seed", r.seed},
        {"workers", r.workers},
        {"round_cap", r.round_cap},
        {"win_threshold", r.win_threshold},
        {"completed", r.completed},
        {"censored", r.censored},
        {"wins", r.wins},
        {"win_rate", r.completed > 0 ? static_cast<double>(r.wins) / static_cast<double>(r.completed) : 0.0},
        {"chick_mean", r.chick_mean},
        {"chick_variance", r.chick_variance},
        {"rounds_mean", r.rounds_mean},
        {"rounds_variance", r.rounds_variance},
        {"correlation", r.correlation ? nlohmann::json(*r.correlation) : nlohmann::json(nullptr)},
        {"chick_histogram", histogram(r.chick_histogram)},
        {"rounds_histogram", histogram(r.rounds_histogram)},
    };
}

inline std::string report_to_text(const SimulationReport& r) {
    std::ostringstream os;
    os.precision(10);
    os << "trials           " << r.trials << " (seed " << r.seed << ", " << r.workers << " worker"
       << (r.workers == 1 ? "" : "s") << ")\n"
       << "censored         " << r.censored << " (round cap " << r.round_cap << ")\n"
       << "win rate         " << (r.completed ? static_cast<double>(r.wins) / static_cast<double>(r.completed) : 0.0)
       << " (" << r.wins << " wins)\n"
       << "chicks mean      " << r.chick_mean << "\n"
       << "chicks variance  " << r.chick_variance << "\n"
       << "rounds mean      " << r.rounds_mean << "\n"
       << "rounds variance  " << r.rounds_variance << "\n"
       << "correlation      ";
    if (r.correlation) os << *r.correlation; else os << "absent";
    os << "\n";
    return os.str();
}

}  // namespace umbral
