// Compares the serial and OpenMP batch heuristic evaluators on a pool of
// search states and checks they produce identical values.

#include "model/parser.h"
#include "search/search.h"

#include "CLI11.hpp"
#include "logistics_gen.h"

#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace std;
using namespace mtplan;

namespace {

// Breadth-first frontier expansion until `limit` states are collected.
vector<State> collect_states(const Problem &problem, size_t limit) {
    vector<State> pool;
    deque<State> frontier;
    frontier.push_back(make_initial_state(problem));
    while (!frontier.empty() && pool.size() < limit) {
        State s = std::move(frontier.front());
        frontier.pop_front();
        for (const auto &action : problem.actions) {
            if (pool.size() + frontier.size() >= 4 * limit)
                break;
            if (applicable(s, action))
                frontier.push_back(apply(s, action, problem));
        }
        if (!s.queue.empty())
            frontier.push_back(advance_time(s, problem));
        pool.push_back(std::move(s));
    }
    while (!frontier.empty() && pool.size() < limit) {
        pool.push_back(std::move(frontier.front()));
        frontier.pop_front();
    }
    return pool;
}

double time_run(const function<void()> &fn, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = chrono::steady_clock::now();
        fn();
        best = min(best,
                   chrono::duration<double>(chrono::steady_clock::now() - t0)
                       .count());
    }
    return best;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Benchmark: serial vs OpenMP batch heuristic evaluation"};
    std::string domain_path, problem_path;
    size_t num_states = 256;
    int repeats = 3;
    int cities = 3, packages = 3;
    unsigned seed = 7;
    app.add_option("--domain", domain_path, "Domain file (default: generated)");
    app.add_option("--problem", problem_path, "Problem file");
    app.add_option("--states", num_states, "States to evaluate per batch");
    app.add_option("--repeat", repeats, "Timed repetitions (best is kept)");
    app.add_option("--cities", cities, "Generated instance: cities");
    app.add_option("--packages", packages, "Generated instance: packages");
    app.add_option("--seed", seed, "Generated instance: seed");
    CLI11_PARSE(app, argc, argv);

    Problem problem;
    try {
        if (!domain_path.empty() && !problem_path.empty()) {
            problem = load_problem_files(domain_path, problem_path);
        } else {
            auto inst = testsupport::generate_logistics(
                {cities, packages, 1, seed});
            problem = load_problem_text(inst.domain, inst.problem);
        }
    } catch (const exception &e) {
        cerr << "error: " << e.what() << "\n";
        return 2;
    }

    vector<State> states = collect_states(problem, num_states);
    HeuristicOptions options; // defaults: relaxed plan + resource adjustment

    vector<double> h_serial, h_parallel;
    double t_serial = time_run(
        [&] { evaluate_batch_serial(problem, states, options, h_serial); },
        repeats);
    double t_parallel = time_run(
        [&] { evaluate_batch_parallel(problem, states, options, h_parallel); },
        repeats);

    size_t mismatches = 0;
    for (size_t i = 0; i < states.size(); ++i)
        if (h_serial[i] != h_parallel[i])
            ++mismatches;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    printf("instance: %s (%zu ground actions)\n", problem.problem_name.c_str(),
           problem.actions.size());
    printf("states evaluated:  %zu\n", states.size());
    printf("threads:           %d\n", threads);
    printf("serial:            %.4f s (%.2f states/ms)\n", t_serial,
           states.size() / (1000.0 * t_serial));
    printf("parallel:          %.4f s (%.2f states/ms)\n", t_parallel,
           states.size() / (1000.0 * t_parallel));
    printf("speedup:           %.2fx\n", t_serial / t_parallel);
    printf("value mismatches:  %zu\n", mismatches);
    return mismatches == 0 ? 0 : 1;
}
