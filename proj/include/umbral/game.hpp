#pragma once

/**
 * @file game.hpp
 * @brief "Count Your Chickens!"-style boards and their compilation to chains.
 *
 * Squares are numbered from 1. Square 1 is the start, the last square is the
 * terminal and matches every animal. A spin is one of K animals or the fox,
 * all equally likely. An animal moves the hen to the next square carrying
 * that animal and earns one chick per square moved, plus one on a blue
 * square. The fox costs one chick (never below zero) and does not move.
 * The game is won with at least N chicks, where the terminal is square N+1;
 * capital is capped at N, so "won" means "capital == N".
 */

#include "umbral/markov_chain.hpp"
#include "umbral/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace umbral {

enum class SquareKind { empty, animal, terminal };

struct Square {
    SquareKind kind = SquareKind::empty;
    std::string animal;  // set iff kind == animal

    friend bool operator==(const Square&, const Square&) = default;
};

struct GameSpec {
    std::vector<Square> squares;       // squares[0] is square 1
    std::vector<std::string> animals;  // the K spinner animals, in spinner order
    std::set<int> blue;
    int win_threshold = 0;  // N

    int size() const { return static_cast<int>(squares.size()); }
    int terminal() const { return size(); }
    int animal_count() const { return static_cast<int>(animals.size()); }
    const Square& at(int square) const { return squares.at(static_cast<std::size_t>(square - 1)); }

    friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

struct Diagnostic {
    std::string where;
    std::string message;

    std::string str() const { return where.empty() ? message : where + ": " + message; }
};

struct GameParseResult {
    std::optional<GameSpec> spec;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return spec.has_value(); }
};

namespace detail {

inline std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

inline std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

// Splits on commas outside braces; strips one pair of enclosing brackets.
inline std::vector<std::string> split_top_level(std::string_view text) {
    std::string body = trim(text);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    for (char c : body) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!trim(current).empty() || !out.empty()) out.push_back(trim(current));
    return out;
}

struct RawGame {
    std::vector<std::string> board;
    bool board_from_string = false;
    std::optional<std::vector<std::string>> animals;
    std::vector<int> blue;
    std::optional<int> win_threshold;
};

inline bool is_empty_token(const std::string& token, bool first) {
    const auto u = upper(token);
    return token == "0" || u == "EMPTY" || (first && u == "START");
}

inline bool is_terminal_token(const std::string& token) {
    return token == "*" || (token.size() >= 2 && token.front() == '{' && token.back() == '}');
}

inline GameParseResult build_game(const RawGame& raw) {
    GameParseResult result;
    auto& diags = result.diagnostics;
    auto board = raw.board;

    if (board.empty()) {
        diags.push_back({"board", "board is empty"});
        return result;
    }

    const bool explicit_terminal = std::any_of(board.begin(), board.end(), is_terminal_token);
    if (!explicit_terminal) {
        if (raw.board_from_string) {
            diags.push_back({"board[" + std::to_string(board.size()) + "]",
                             "missing terminal: the last square must be '*' or '{...}'"});
            return result;
        }
        board.push_back("*");
    }

    std::vector<std::string> terminal_tags;
    GameSpec spec;
    for (std::size_t i = 0; i < board.size(); ++i) {
        const std::string& token = board[i];
        const std::string where = "board[" + std::to_string(i + 1) + "]";
        const bool last = i + 1 == board.size();
        if (is_terminal_token(token)) {
            if (!last) {
                diags.push_back({where, "terminal square must be the last square"});
                continue;
            }
            if (token != "*") terminal_tags = split_top_level(token.substr(1, token.size() - 2));
            spec.squares.push_back({SquareKind::terminal, {}});
        } else if (last) {
            diags.push_back({where, "missing terminal: the last square is '" + token + "'"});
        } else if (is_empty_token(token, i == 0)) {
            spec.squares.push_back({SquareKind::empty, {}});
        } else if (i == 0) {
            diags.push_back({where, "the start square must be empty, got '" + token + "'"});
        } else if (token.empty()) {
            diags.push_back({where, "empty label"});
        } else {
            spec.squares.push_back({SquareKind::animal, token});
        }
    }

    if (raw.animals) {
        spec.animals = *raw.animals;
    } else if (!terminal_tags.empty()) {
        spec.animals = terminal_tags;
    } else {
        for (const auto& sq : spec.squares) {
            if (sq.kind == SquareKind::animal &&
                std::find(spec.animals.begin(), spec.animals.end(), sq.animal) == spec.animals.end()) {
                spec.animals.push_back(sq.animal);
            }
        }
    }
    {
        std::set<std::string> unique(spec.animals.begin(), spec.animals.end());
        if (unique.size() != spec.animals.size()) diags.push_back({"animals", "animal tags must be distinct"});
        if (spec.animals.empty()) diags.push_back({"animals", "need at least one animal (K >= 1)"});
        if (!terminal_tags.empty() && std::set<std::string>(terminal_tags.begin(), terminal_tags.end()) != unique) {
            diags.push_back({"board[" + std::to_string(board.size()) + "]",
                             "terminal must be labeled by exactly the spinner animals"});
        }
        for (std::size_t i = 0; i < board.size(); ++i) {
            const auto& token = board[i];
            if (i == 0 || is_terminal_token(token) || is_empty_token(token, false) || token.empty()) continue;
            if (!unique.contains(token)) {
                diags.push_back({"board[" + std::to_string(i + 1) + "]", "unknown animal tag '" + token + "'"});
            }
        }
    }

    const int n = static_cast<int>(board.size()) - 1;
    if (n < 1) diags.push_back({"board", "need at least one square before the terminal (N >= 1)"});
    spec.win_threshold = n;
    if (raw.win_threshold && *raw.win_threshold != n) {
        diags.push_back({"win_threshold", "wrong square count: win_threshold " + std::to_string(*raw.win_threshold) +
                                              " requires " + std::to_string(*raw.win_threshold + 1) +
                                              " squares, board has " + std::to_string(board.size())});
    }
    for (std::size_t k = 0; k < raw.blue.size(); ++k) {
        const int b = raw.blue[k];
        if (b < 2 || b > n + 1) {
            diags.push_back({"blue[" + std::to_string(k) + "]",
                             "blue index " + std::to_string(b) + " out of range 2.." + std::to_string(n + 1)});
        } else {
            spec.blue.insert(b);
        }
    }

    if (diags.empty()) result.spec = std::move(spec);
    return result;
}

inline std::vector<int> parse_int_list(std::string_view text) {
    std::string body = trim(text);
    if (body.size() >= 2 && (body.front() == '{' || body.front() == '[')) body = body.substr(1, body.size() - 2);
    std::vector<int> out;
    for (const auto& token : split_top_level(body)) {
        if (token.empty()) continue;
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument("not an integer: '" + token + "'");
        out.push_back(v);
    }
    return out;
}

inline GameParseResult parse_game_json(const nlohmann::json& j) {
    GameParseResult bad;
    RawGame raw;
    try {
        if (!j.is_object()) {
            bad.diagnostics.push_back({"", "game spec must be a JSON object"});
            return bad;
        }
        if (!j.contains("board")) {
            bad.diagnostics.push_back({"board", "missing field"});
            return bad;
        }
        const auto& board = j.at("board");
        if (board.is_string()) {
            raw.board = split_top_level(board.get<std::string>());
            raw.board_from_string = true;
        } else {
            raw.board = board.get<std::vector<std::string>>();
        }
        if (j.contains("animals")) raw.animals = j.at("animals").get<std::vector<std::string>>();
        if (j.contains("blue")) raw.blue = j.at("blue").get<std::vector<int>>();
        if (j.contains("win_threshold")) raw.win_threshold = j.at("win_threshold").get<int>();
    } catch (const nlohmann::json::exception& ex) {
        bad.diagnostics.push_back({"", ex.what()});
        return bad;
    }
    return build_game(raw);
}

// "key: value" lines; keys board, blue, animals, win_threshold; '#' comments.
inline GameParseResult parse_game_lines(std::string_view text) {
    GameParseResult bad;
    RawGame raw;
    raw.board_from_string = true;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_board = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto colon = line.find(':');
        const std::string where = "line " + std::to_string(line_no);
        if (colon == std::string::npos) {
            bad.diagnostics.push_back({where, "expected 'key: value'"});
            continue;
        }
        const auto key = upper(trim(std::string_view(line).substr(0, colon)));
        const auto value = std::string_view(line).substr(colon + 1);
        try {
            if (key == "BOARD") {
                raw.board = split_top_level(value);
                saw_board = true;
            } else if (key == "BLUE") {
                raw.blue = parse_int_list(value);
            } else if (key == "ANIMALS") {
                std::string body = trim(value);
                if (body.size() >= 2 && (body.front() == '{' || body.front() == '[')) body = body.substr(1, body.size() - 2);
                raw.animals = split_top_level(body);
            } else if (key == "WIN_THRESHOLD") {
                raw.win_threshold = parse_int_list(value).at(0);
            } else {
                bad.diagnostics.push_back({where, "unknown key '" + trim(std::string_view(line).substr(0, colon)) + "'"});
            }
        } catch (const std::exception& ex) {
            bad.diagnostics.push_back({where, ex.what()});
        }
    }
    if (!saw_board) bad.diagnostics.push_back({"board", "missing field"});
    if (!bad.diagnostics.empty()) return bad;
    return build_game(raw);
}

}  // namespace detail

/// Parses a game from JSON text, or from the "key: value" line form when the
/// text does not start with '{'. Never throws on bad input; problems come
/// back as diagnostics.
inline GameParseResult parse_game_spec(std::string_view text) {
    const auto body = detail::trim(text);
    if (!body.empty() && body.front() == '{') {
        GameParseResult bad;
        try {
            return detail::parse_game_json(nlohmann::json::parse(body));
        } catch (const nlohmann::json::parse_error& ex) {
            bad.diagnostics.push_back({"byte " + std::to_string(ex.byte), ex.what()});
            return bad;
        }
    }
    return detail::parse_game_lines(text);
}

inline GameParseResult parse_game_json(const nlohmann::json& j) { return detail::parse_game_json(j); }

inline nlohmann::json game_to_json(const GameSpec& spec) {
    nlohmann::json board = nlohmann::json::array();
    for (const auto& sq : spec.squares) {
        switch (sq.kind) {
            case SquareKind::empty: board.push_back("0"); break;
            case SquareKind::animal: board.push_back(sq.animal); break;
            case SquareKind::terminal: board.push_back("*"); break;
        }
    }
    return {{"animals", spec.animals},
            {"board", std::move(board)},
            {"blue", std::vector<int>(spec.blue.begin(), spec.blue.end())},
            {"win_threshold", spec.win_threshold}};
}

/// Smallest square after `square` labeled `animal` (the terminal matches all).
inline int next_location(const GameSpec& spec, int square, const std::string& animal) {
    if (square < 1 || square >= spec.terminal()) {
        throw std::out_of_range("next_location: square " + std::to_string(square) + " is not a playable square");
    }
    if (std::find(spec.animals.begin(), spec.animals.end(), animal) == spec.animals.end()) {
        throw std::invalid_argument("next_location: unknown animal '" + animal + "'");
    }
    for (int j = square + 1; j <= spec.terminal(); ++j) {
        const auto& sq = spec.at(j);
        if (sq.kind == SquareKind::terminal || (sq.kind == SquareKind::animal && sq.animal == animal)) return j;
    }
    throw std::logic_error("next_location: board has no terminal");
}

inline int chick_gain(const GameSpec& spec, int from, int to) { return to - from + (spec.blue.contains(to) ? 1 : 0); }

struct CompileOptions {
    bool merge_parallel_edges = true;
    bool prune_unreachable = false;
};

/// The chain for a game: transient states are the start and the labeled
/// squares (ids are square numbers), the terminal is the one absorbing state,
/// and capital lives on [0, N].
inline WeightedMarkovChain compile_game(const GameSpec& spec, const CompileOptions& options = {}) {
    const Rational spin = rat(1, spec.animal_count() + 1);

    std::vector<int> squares{1};
    for (int i = 2; i < spec.terminal(); ++i) {
        if (spec.at(i).kind == SquareKind::animal) squares.push_back(i);
    }

    if (options.prune_unreachable) {
        std::set<int> reached{1};
        std::vector<int> frontier{1};
        while (!frontier.empty()) {
            const int i = frontier.back();
            frontier.pop_back();
            for (const auto& a : spec.animals) {
                const int j = next_location(spec, i, a);
                if (j != spec.terminal() && reached.insert(j).second) frontier.push_back(j);
            }
        }
        std::erase_if(squares, [&](int i) { return !reached.contains(i); });
    }

    std::vector<std::string> transient;
    std::vector<Edge> edges;
    for (int i : squares) {
        const std::string id = std::to_string(i);
        transient.push_back(id);
        edges.push_back({id, id, spin, -1});

        // (dst, weight) -> probability; std::map keeps the edge order stable
        std::map<std::pair<int, int>, Rational> moves;
        for (const auto& a : spec.animals) {
            const int j = next_location(spec, i, a);
            const int gain = chick_gain(spec, i, j);
            if (options.merge_parallel_edges) {
                moves[{j, gain}] += spin;
            } else {
                edges.push_back({id, std::to_string(j), spin, gain});
            }
        }
        for (const auto& [key, prob] : moves) edges.push_back({id, std::to_string(key.first), prob, key.second});
    }

    return WeightedMarkovChain(std::move(transient), {std::to_string(spec.terminal())}, std::move(edges),
                               CapitalSupport{0, spec.win_threshold});
}

inline ChainDocument compile_game_document(const GameSpec& spec, const CompileOptions& options = {}) {
    return {compile_game(spec, options), "1", 0};
}

inline GameSpec builtin_game(std::string_view name) {
    GameParseResult parsed;
    if (name == "simplified") {
        parsed = parse_game_spec(R"({
            "animals": ["COW", "SHEEP"],
            "board": ["START", "0", "SHEEP", "COW", "0", "COW", "0", "SHEEP", "{COW,SHEEP}"],
            "blue": [3, 6]
        })");
    } else if (name == "full") {
        parsed = parse_game_spec(R"({
            "animals": ["C", "D", "P", "S", "T"],
            "board": "[0,0,S,P,T,C,D,P,C,D,S,T,0,C,P,0,0,0,T,0,T,D,S,C,D,P,T,0,S,C,0,0,T,P,S,D,0,S,C,P,{C,D,P,S,T}]",
            "blue": [5, 9, 23, 36, 40]
        })");
    } else {
        throw std::invalid_argument("unknown builtin game '" + std::string(name) + "' (expected simplified or full)");
    }
    if (!parsed.ok()) throw std::logic_error("builtin game failed to parse: " + parsed.diagnostics.front().str());
    return *parsed.spec;
}

}  // namespace umbral
