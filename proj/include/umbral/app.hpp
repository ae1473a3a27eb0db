#pragma once

/**
 * @file app.hpp
 * @brief The four batch commands behind the `umbral` executable.
 *
 * Each command writes its report to `out`, diagnostics to `err`, and returns
 * the process exit code: 0 success, 1 runtime failure (including a failed
 * comparison), 2 input or validation error.
 */

#include "umbral/compare.hpp"
#include "umbral/game.hpp"
#include "umbral/markov_chain.hpp"
#include "umbral/simulator.hpp"
#include "umbral/stats.hpp"
#include "umbral/umbra.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace umbral {

enum class Command { analyze, simulate, compare, dump_chain };

struct RunConfig {
    Command command = Command::analyze;
    std::string input;    // file path; empty when builtin is set
    std::string builtin;  // "simplified" | "full"
    int rounds = 60;      // M
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::optional<std::int64_t> round_cap;  // default 10 * M
    int digits = 13;
    std::string output;  // empty: stdout
    ReportFormat format = ReportFormat::text;
    bool full_record = false;
    std::string reference;  // compare: take the exact side from this input instead
};

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_input_error = 2 };

class InputError : public std::runtime_error {
public:
    explicit InputError(std::vector<std::string> diagnostics)
        : std::runtime_error(diagnostics.empty() ? "invalid input" : diagnostics.front()),
          diagnostics_(std::move(diagnostics)) {}

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// A parsed input: always a chain, plus the game it came from when there was one.
struct LoadedInput {
    std::optional<GameSpec> game;
    ChainDocument chain;

    std::int64_t win_threshold() const { return chain.chain.support().max; }
};

inline LoadedInput load_game(const GameSpec& spec) { return {spec, compile_game_document(spec)}; }

inline LoadedInput load_chain(ChainDocument doc) {
    std::vector<std::string> problems;
    for (const auto& v : validate_chain(doc.chain)) problems.push_back(v.str());
    if (!doc.chain.is_transient(doc.start)) problems.push_back("start: '" + doc.start + "' is not a transient state");
    if (!doc.chain.support().contains(doc.initial_capital)) {
        problems.push_back("initial_capital: " + std::to_string(doc.initial_capital) + " is outside the support");
    }
    if (!problems.empty()) throw InputError(std::move(problems));
    return {std::nullopt, std::move(doc)};
}

/// Reads a builtin name, a game file (JSON or line form), or a chain JSON
/// file (recognized by a top-level "edges" field).
inline LoadedInput load_input(const std::string& builtin, const std::string& path) {
    if (!builtin.empty()) {
        try {
            return load_game(builtin_game(builtin));
        } catch (const std::invalid_argument& ex) {
            throw InputError({ex.what()});
        }
    }
    if (path.empty()) throw InputError({"no input: give a file or --builtin <simplified|full>"});

    std::ifstream in(path);
    if (!in) throw InputError({path + ": cannot open"});
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::optional<nlohmann::json> doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        // not JSON; the game parser reports line-form or JSON syntax problems
    }
    if (doc && doc->is_object() && doc->contains("edges")) {
        try {
            return load_chain(chain_from_json(*doc));
        } catch (const ChainFormatError& ex) {
            throw InputError({path + ": " + ex.what()});
        }
    }
    auto parsed = doc ? parse_game_json(*doc) : parse_game_spec(text);
    if (!parsed.ok()) {
        std::vector<std::string> lines;
        for (const auto& d : parsed.diagnostics) lines.push_back(path + ": " + d.str());
        throw InputError(std::move(lines));
    }
    return load_game(*parsed.spec);
}

inline AbsorptionRecord analyze_record(const LoadedInput& in, int rounds) {
    return run_absorption(in.chain.chain, in.chain.start, rounds, in.chain.initial_capital);
}

inline SummaryStats analyze_stats(const LoadedInput& in, int rounds) {
    return summarize(analyze_record(in, rounds), in.win_threshold());
}

inline SimulationReport simulate_input(const LoadedInput& in, const RunConfig& cfg) {
    const std::int64_t cap = cfg.round_cap.value_or(10LL * cfg.rounds);
    if (in.game) return simulate(*in.game, cfg.trials, cfg.seed, cap, cfg.workers);
    return simulate_chain(in.chain, cfg.trials, cfg.seed, cap, cfg.workers);
}

namespace detail {

inline void check_config(const RunConfig& cfg) {
    std::vector<std::string> problems;
    if (cfg.rounds < 1) problems.push_back("--rounds must be >= 1");
    if (cfg.trials < 1) problems.push_back("--trials must be >= 1");
    if (cfg.digits < 1) problems.push_back("--digits must be >= 1");
    if (cfg.workers < 1) problems.push_back("--workers must be >= 1");
    if (cfg.round_cap && *cfg.round_cap < 1) problems.push_back("--round-cap must be >= 1");
    if (!problems.empty()) throw InputError(std::move(problems));
}

struct CommandResult {
    std::string body;
    int code = exit_ok;
};

inline CommandResult run_command(const RunConfig& cfg) {
    check_config(cfg);
    const LoadedInput in = load_input(cfg.builtin, cfg.input);
    const bool json = cfg.format == ReportFormat::json;

    switch (cfg.command) {
        case Command::analyze: {
            const auto rec = analyze_record(in, cfg.rounds);
            if (rec.epsilon == Rational{1}) {
                // Nothing absorbed within the horizon: no conditional statistics exist.
                if (json) {
                    nlohmann::json j = {{"M", rec.rounds_run},
                                        {"epsilon", {{"decimal", "1"}, {"fraction", "1"}}},
                                        {"absorbed_mass", "0"}};
                    if (cfg.full_record) j["record"] = record_to_json(rec);
                    return {j.dump(2) + "\n"};
                }
                std::string text = "rounds (M)                " + std::to_string(rec.rounds_run) +
                                   "\nepsilon                   1\nnothing absorbed within the horizon\n";
                if (cfg.full_record) text += record_to_text(rec);
                return {text};
            }
            const auto stats = summarize(rec, in.win_threshold());
            if (json) {
                auto j = stats_to_json(stats, cfg.digits);
                if (cfg.full_record) j["record"] = record_to_json(rec);
                return {j.dump(2) + "\n"};
            }
            std::string text = render_stats(stats, cfg.digits);
            if (cfg.full_record) text += record_to_text(rec);
            return {text};
        }
        case Command::simulate: {
            const auto report = simulate_input(in, cfg);
            return {json ? report_to_json(report).dump(2) + "\n" : report_to_text(report)};
        }
        case Command::compare: {
            const LoadedInput exact_side = cfg.reference.empty() ? in
                                           : (cfg.reference == "simplified" || cfg.reference == "full")
                                               ? load_input(cfg.reference, "")
                                               : load_input("", cfg.reference);
            const auto stats = analyze_stats(exact_side, cfg.rounds);
            const auto report = simulate_input(in, cfg);
            const auto cmp = compare(stats, report);
            return {json ? comparison_to_json(cmp).dump(2) + "\n" : comparison_to_text(cmp),
                    cmp.pass ? exit_ok : exit_failure};
        }
        case Command::dump_chain:
            return {chain_to_json(in.chain).dump(2) + "\n"};
    }
    throw std::logic_error("unknown command");
}

}  // namespace detail

/// Runs one command. Output goes to cfg.output when set, else to `out`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto emit = [&](const std::string& body) {
        if (cfg.output.empty()) {
            out << body;
            return true;
        }
        std::ofstream file(cfg.output);
        file << body;
        if (!file) {
            err << "error: cannot write " << cfg.output << "\n";
            return false;
        }
        return true;
    };
    try {
        const auto result = detail::run_command(cfg);
        if (!emit(result.body)) return exit_failure;
        if (result.code == exit_failure) err << "error: exact and simulated statistics disagree\n";
        return result.code;
    } catch (const InputError& ex) {
        for (const auto& d : ex.diagnostics()) err << "error: " << d << "\n";
        return exit_input_error;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_failure;
    }
}

}  // namespace umbral
