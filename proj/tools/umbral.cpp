// umbral: exact absorption analysis of weighted Markov chains and
// "Count Your Chickens!"-style boards.
//
//   umbral analyze    --builtin full -M 60
//   umbral simulate   --builtin full --trials 1000000 --seed 1
//   umbral compare    --builtin full --trials 1000000 --seed 1
//   umbral dump-chain --builtin simplified

#include "umbral/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"Exact absorption analysis of weighted Markov chains and chicken-counting board games"};
    app.require_subcommand(1);

    umbral::RunConfig cfg;
    std::int64_t round_cap = 0;
    const std::map<std::string, umbral::ReportFormat> formats{{"text", umbral::ReportFormat::text},
                                                              {"json", umbral::ReportFormat::json}};

    auto add_common = [&](CLI::App* sub) {
        auto* file = sub->add_option("input", cfg.input, "game spec (JSON or line form) or chain JSON file");
        auto* builtin = sub->add_option("--builtin", cfg.builtin, "use a built-in board")
                            ->check(CLI::IsMember({"simplified", "full"}));
        file->excludes(builtin);
        sub->add_option("-M,--rounds", cfg.rounds, "analysis horizon M (rounds)")->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "text or json")->transform(CLI::CheckedTransformer(formats));
        sub->add_option("--output", cfg.output, "write the report here instead of stdout");
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--trials", cfg.trials, "number of simulated games")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "PRNG seed");
        sub->add_option("--workers", cfg.workers, "parallel workers (part of the reproducibility key)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--round-cap", round_cap, "censor games longer than this (default 10*M)")
            ->check(CLI::PositiveNumber);
    };

    auto* analyze = app.add_subcommand("analyze", "exact statistics at absorption");
    add_common(analyze);
    analyze->add_option("--digits", cfg.digits, "decimal places in the report")->check(CLI::PositiveNumber);
    analyze->add_flag("--full-record", cfg.full_record, "also emit every (round, state) polynomial of R");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo play");
    add_common(simulate);
    add_sampling(simulate);

    auto* compare = app.add_subcommand("compare", "exact vs simulated, pass/fail at 4 standard errors");
    add_common(compare);
    add_sampling(compare);
    compare->add_option("--reference", cfg.reference, "take the exact side from this input (builtin name or file)");

    auto* dump = app.add_subcommand("dump-chain", "print the compiled weighted Markov chain as JSON");
    add_common(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? umbral::exit_ok : umbral::exit_input_error;
    }

    if (analyze->parsed()) cfg.command = umbral::Command::analyze;
    if (simulate->parsed()) cfg.command = umbral::Command::simulate;
    if (compare->parsed()) cfg.command = umbral::Command::compare;
    if (dump->parsed()) cfg.command = umbral::Command::dump_chain;
    if (round_cap > 0) cfg.round_cap = round_cap;
    if (cfg.command == umbral::Command::dump_chain) cfg.format = umbral::ReportFormat::json;

    return umbral::run(cfg, std::cout, std::cerr);
}
