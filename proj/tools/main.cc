#include "cli/cli.h"

#include "CLI11.hpp"

#include <iostream>
#include <string>

using namespace mtplan;

int main(int argc, char **argv) {
    CLI::App app{"Forward-search temporal planner over durative actions and "
                 "metric resources"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string lookahead = "inf";
    std::string prop = "sum";
    std::string adjust = "resource";

    CLI::App *solve = app.add_subcommand("solve", "Search for a plan");
    solve->add_option("domain", cfg.domain_path, "Domain file")->required();
    solve->add_option("problem", cfg.problem_path, "Problem file")->required();
    solve
        ->add_option("--alpha", cfg.alpha,
                     "Objective weight: 1 minimizes cost, 0 minimizes "
                     "makespan (default: the problem metric's mix, else 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    solve->add_option(
        "--lookahead", lookahead,
        "Extra event sweeps after all goals become reachable: a count or "
        "'inf' (default inf)");
    solve->add_option("--prop", prop, "Goal-cost combination rule")
        ->check(CLI::IsMember({"max", "sum"}));
    solve->add_option("--adjust", adjust, "Heuristic adjustments")
        ->check(CLI::IsMember({"none", "mutex", "resource", "both"}));
    solve->add_flag("--partialize,!--no-partialize", cfg.partialize_plan,
                    "Also emit the order-constrained plan (default on)");
    solve
        ->add_option("--timeout", cfg.timeout_seconds,
                     "Wall-clock limit in seconds (0 = none)")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"plan", "json", "dot"}));
    solve->add_flag("--serial", "Evaluate states on a single thread");

    std::string v_domain, v_problem, v_plan;
    CLI::App *val = app.add_subcommand(
        "validate", "Replay a plan file against a domain and problem");
    val->add_option("domain", v_domain, "Domain file")->required();
    val->add_option("problem", v_problem, "Problem file")->required();
    val->add_option("plan", v_plan, "Plan file in the emitted format")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // help exits 0; bad flags are input errors
    }

    try {
        if (solve->parsed()) {
            if (lookahead == "inf") {
                cfg.lookahead = LOOKAHEAD_INF;
            } else {
                try {
                    size_t pos = 0;
                    cfg.lookahead = std::stol(lookahead, &pos);
                    if (pos != lookahead.size() || cfg.lookahead < 0)
                        throw std::invalid_argument(lookahead);
                } catch (const std::exception &) {
                    std::cerr << "error: --lookahead needs a non-negative "
                                 "count or 'inf'\n";
                    return 2;
                }
            }
            cfg.sum_propagation = (prop == "sum");
            cfg.adjust_mutex = (adjust == "mutex" || adjust == "both");
            cfg.adjust_resource = (adjust == "resource" || adjust == "both");
            cfg.parallel_eval = solve->count("--serial") == 0;
            return run(cfg, std::cout, std::cerr);
        }
        return validate(v_domain, v_problem, v_plan, std::cout, std::cerr);
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
