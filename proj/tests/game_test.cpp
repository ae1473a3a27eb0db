#include "support.hpp"
#include "umbral/game.hpp"
#include "umbral/umbra.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace umbral {
namespace {

bool has_diagnostic(const GameParseResult& r, const std::string& needle) {
    return std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                       [&](const Diagnostic& d) { return d.str().find(needle) != std::string::npos; });
}

std::vector<const Edge*> edges_from(const WeightedMarkovChain& chain, const std::string& id) {
    std::vector<const Edge*> out;
    for (const auto& e : chain.edges()) {
        if (e.src == id) out.push_back(&e);
    }
    return out;
}

TEST(ParseGame, FullBoard) {
    const auto spec = builtin_game("full");
    EXPECT_EQ(spec.win_threshold, 40);
    EXPECT_EQ(spec.animal_count(), 5);
    EXPECT_EQ(spec.size(), 41);
    EXPECT_EQ(spec.blue, (std::set<int>{5, 9, 23, 36, 40}));
    EXPECT_EQ(spec.at(3).animal, "S");
    EXPECT_EQ(spec.at(40).animal, "P");
    EXPECT_EQ(spec.at(41).kind, SquareKind::terminal);
}

TEST(ParseGame, SimplifiedBoard) {
    const auto spec = builtin_game("simplified");
    EXPECT_EQ(spec.win_threshold, 8);
    EXPECT_EQ(spec.animal_count(), 2);
    EXPECT_EQ(spec.blue, (std::set<int>{3, 6}));
    EXPECT_EQ(spec.at(1).kind, SquareKind::empty);
    EXPECT_EQ(spec.at(2).kind, SquareKind::empty);
    EXPECT_EQ(spec.at(3).animal, "SHEEP");
    EXPECT_EQ(spec.at(4).animal, "COW");
}

TEST(ParseGame, JsonArrayFormAppendsTheTerminal) {
    const auto r = parse_game_spec(R"({"animals": ["C","S"], "board": ["0","C","0","S"], "blue": [2]})");
    ASSERT_TRUE(r.ok()) << r.diagnostics.front().str();
    EXPECT_EQ(r.spec->size(), 5);
    EXPECT_EQ(r.spec->win_threshold, 4);
    EXPECT_EQ(r.spec->at(5).kind, SquareKind::terminal);

    const auto explicit_star = parse_game_spec(R"({"animals": ["C","S"], "board": ["0","C","0","S","*"]})");
    ASSERT_TRUE(explicit_star.ok());
    EXPECT_EQ(explicit_star.spec->win_threshold, 4);
}

TEST(ParseGame, StringBoardNeedsAnExplicitTerminal) {
    const auto r = parse_game_spec(R"({"animals": ["C"], "board": "[0,C,0]"})");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_diagnostic(r, "missing terminal"));
}

TEST(ParseGame, LineForm) {
    const auto r = parse_game_spec(
        "# the small board\n"
        "board: [START,EMPTY,SHEEP,COW,EMPTY,COW,EMPTY,SHEEP,{COW,SHEEP}]\n"
        "blue: {3,6}\n");
    ASSERT_TRUE(r.ok()) << r.diagnostics.front().str();
    EXPECT_EQ(r.spec->animals, (std::vector<std::string>{"COW", "SHEEP"}));
    EXPECT_EQ(compile_game(*r.spec), compile_game(builtin_game("simplified")));
}

TEST(ParseGame, Diagnostics) {
    const auto unknown = parse_game_spec(R"({"animals": ["C"], "board": ["0","C","X"]})");
    EXPECT_TRUE(has_diagnostic(unknown, "board[3]: unknown animal tag 'X'"));

    const auto blue = parse_game_spec(R"({"animals": ["C"], "board": ["0","C"], "blue": [1, 9]})");
    EXPECT_TRUE(has_diagnostic(blue, "blue[0]: blue index 1 out of range 2..3"));
    EXPECT_TRUE(has_diagnostic(blue, "blue[1]: blue index 9"));

    const auto count = parse_game_spec(R"({"animals": ["C"], "board": ["0","C"], "win_threshold": 5})");
    EXPECT_TRUE(has_diagnostic(count, "wrong square count"));

    const auto misplaced = parse_game_spec(R"({"animals": ["C"], "board": ["0","*","C"]})");
    EXPECT_TRUE(has_diagnostic(misplaced, "terminal square must be the last square"));

    const auto start = parse_game_spec(R"({"animals": ["C"], "board": ["C","C"]})");
    EXPECT_TRUE(has_diagnostic(start, "start square must be empty"));

    const auto terminal_tags = parse_game_spec(R"({"animals": ["C","D"], "board": "[0,C,D,{C}]"})");
    EXPECT_TRUE(has_diagnostic(terminal_tags, "terminal must be labeled by exactly the spinner animals"));

    const auto syntax = parse_game_spec(R"({"animals": ["C"], "board": )");
    ASSERT_FALSE(syntax.ok());
    EXPECT_EQ(syntax.diagnostics.front().where.rfind("byte ", 0), 0u);

    const auto lines = parse_game_spec("board: [0,C,*]\ncolour: 3\n");
    EXPECT_TRUE(has_diagnostic(lines, "line 2: unknown key 'colour'"));

    EXPECT_TRUE(has_diagnostic(parse_game_spec("blue: 3\n"), "board: missing field"));
    EXPECT_TRUE(has_diagnostic(parse_game_spec(R"({"animals": ["C","C"], "board": ["0","C"]})"), "distinct"));
}

TEST(NextLocation, FollowsTheLabels) {
    const auto spec = builtin_game("simplified");
    EXPECT_EQ(next_location(spec, 1, "SHEEP"), 3);
    EXPECT_EQ(next_location(spec, 1, "COW"), 4);
    EXPECT_EQ(next_location(spec, 4, "SHEEP"), 8);
    EXPECT_EQ(next_location(spec, 8, "COW"), 9);
    EXPECT_EQ(next_location(spec, 8, "SHEEP"), 9);
    EXPECT_THROW(next_location(spec, 9, "COW"), std::out_of_range);
    EXPECT_THROW(next_location(spec, 1, "PIG"), std::invalid_argument);
}

TEST(NextLocation, NeverSkipsAMatchingSquare) {
    for (const char* name : {"simplified", "full"}) {
        const auto spec = builtin_game(name);
        for (int i = 1; i < spec.terminal(); ++i) {
            for (const auto& a : spec.animals) {
                const int j = next_location(spec, i, a);
                ASSERT_GT(j, i);
                for (int k = i + 1; k < j; ++k) {
                    ASSERT_FALSE(spec.at(k).kind == SquareKind::animal && spec.at(k).animal == a)
                        << name << ": " << i << " -> " << j << " skipped " << k;
                }
            }
        }
    }
}

TEST(ChickGain, CountsSquaresAndBlueBonus) {
    const auto spec = builtin_game("simplified");
    EXPECT_EQ(chick_gain(spec, 1, 3), 3);
    EXPECT_EQ(chick_gain(spec, 4, 6), 3);
    EXPECT_EQ(chick_gain(spec, 6, 8), 2);
    EXPECT_EQ(chick_gain(spec, 8, 9), 1);
}

TEST(CompileGame, SquareFourMatchesWorkedTransition) {
    const auto chain = compile_game(builtin_game("simplified"));
    const auto edges = edges_from(chain, "4");
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_EQ(*edges[0], (Edge{"4", "4", rat(1, 3), -1}));
    EXPECT_EQ(*edges[1], (Edge{"4", "6", rat(1, 3), 3}));
    EXPECT_EQ(*edges[2], (Edge{"4", "8", rat(1, 3), 4}));
}

TEST(CompileGame, SquareEightMergesBothAnimalsIntoTheTerminal) {
    const auto chain = compile_game(builtin_game("simplified"));
    const auto edges = edges_from(chain, "8");
    ASSERT_EQ(edges.size(), 2u);
    EXPECT_EQ(*edges[0], (Edge{"8", "8", rat(1, 3), -1}));
    EXPECT_EQ(*edges[1], (Edge{"8", "9", rat(2, 3), 1}));
}

TEST(CompileGame, StateCounts) {
    const auto small = compile_game(builtin_game("simplified"));
    EXPECT_EQ(small.transient_states(), (std::vector<std::string>{"1", "3", "4", "6", "8"}));
    EXPECT_EQ(small.absorbing_states(), (std::vector<std::string>{"9"}));
    EXPECT_EQ(small.support(), (CapitalSupport{0, 8}));

    const auto full_spec = builtin_game("full");
    const auto labeled = std::count_if(full_spec.squares.begin(), full_spec.squares.end(),
                                       [](const Square& s) { return s.kind == SquareKind::animal; });
    EXPECT_EQ(labeled, 29);
    const auto full = compile_game(full_spec);
    EXPECT_EQ(full.transient_states().size(), 30u);
    EXPECT_EQ(full.absorbing_states(), (std::vector<std::string>{"41"}));
}

TEST(CompileGame, EdgeWeightInvariants) {
    for (const char* name : {"simplified", "full"}) {
        const auto chain = compile_game(builtin_game(name));
        EXPECT_TRUE(validate_chain(chain).empty()) << name;
        for (const auto& e : chain.edges()) {
            if (e.src == e.dst) {
                EXPECT_EQ(e.weight, -1);
            } else {
                EXPECT_GE(e.weight, 1);
            }
        }
    }
}

TEST(CompileGame, MergingParallelEdgesDoesNotChangeResults) {
    for (const char* name : {"simplified", "full"}) {
        const auto spec = builtin_game(name);
        const auto merged = compile_game(spec);
        const auto unmerged = compile_game(spec, {.merge_parallel_edges = false});
        EXPECT_GT(unmerged.edges().size(), merged.edges().size());
        EXPECT_TRUE(validate_chain(unmerged).empty());
        EXPECT_EQ(run_absorption(merged, "1", 25), run_absorption(unmerged, "1", 25)) << name;
    }
}

TEST(CompileGame, PruningFindsEveryLabeledSquareReachable) {
    // Each occurrence of an animal is one spin away from the previous one (or
    // from the start), so pruning never removes a state on these boards.
    for (const char* name : {"simplified", "full"}) {
        const auto spec = builtin_game(name);
        const auto all = compile_game(spec);
        const auto pruned = compile_game(spec, {.prune_unreachable = true});
        EXPECT_EQ(pruned, all) << name;
    }
    const auto r = parse_game_spec(R"({"animals": ["C","D"], "board": ["0","C","0","D","D","0","C"]})");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(compile_game(*r.spec, {.prune_unreachable = true}).transient_states(),
              (std::vector<std::string>{"1", "2", "4", "5", "7"}));
}

TEST(CompileGame, MaximumCapitalIsTheCap) {
    for (const char* name : {"simplified", "full"}) {
        const auto spec = builtin_game(name);
        const auto capital = marginal_capital(run_absorption(compile_game(spec), "1", 60));
        EXPECT_GT(capital.coefficient(spec.win_threshold), Rational{0}) << name;
        EXPECT_EQ(capital.support().max, spec.win_threshold);
    }
}

TEST(CompileGame, AgreesWithRuleEnumeration) {
    const auto spec = builtin_game("simplified");
    const auto chain = compile_game(spec);
    for (int rounds = 1; rounds <= 8; ++rounds) {
        EXPECT_EQ(testing::cells_of(run_absorption(chain, "1", rounds)), testing::enumerate_game(spec, rounds))
            << "rounds " << rounds;
    }
}

TEST(Builtins, UnknownNameThrows) {
    EXPECT_THROW(builtin_game("x"), std::invalid_argument);
}

TEST(GameJson, RoundTrips) {
    for (const char* name : {"simplified", "full"}) {
        const auto spec = builtin_game(name);
        const auto again = parse_game_spec(game_to_json(spec).dump());
        ASSERT_TRUE(again.ok());
        EXPECT_EQ(*again.spec, spec);
    }
}

}  // namespace
}  // namespace umbral
