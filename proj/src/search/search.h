#pragma once

#include "heuristics/heuristics.h"
#include "state/plan.h"

#include <vector>

namespace mtplan {

struct SearchOptions {
    HeuristicOptions heuristic;
    double timeout_seconds = 0.0; // 0 = unlimited
    long max_expansions = 0;      // 0 = unlimited
    bool parallel_eval = true;    // evaluate generated children with OpenMP
};

enum class SearchStatus { Solved, Unsolvable, Limit };

struct SearchResult {
    SearchStatus status = SearchStatus::Unsolvable;
    Plan plan;          // valid when status == Solved
    long expanded = 0;
    long generated = 0;
    long evaluated = 0;
    double elapsed_seconds = 0.0;
};

// Weighted-A* forward search over time-stamped states; f combines spent cost
// and committed makespan with the heuristic estimate of what remains.
// Returned plans are replayed through the transition engine before being
// reported (a failure there is a logic error, not a planning failure).
SearchResult plan(const Problem &problem, const SearchOptions &options);

// Heuristic values for a batch of states. The two variants compute identical
// results; the parallel one distributes states across OpenMP threads.
void evaluate_batch_serial(const Problem &problem,
                           const std::vector<State> &states,
                           const HeuristicOptions &options,
                           std::vector<double> &h_out);
void evaluate_batch_parallel(const Problem &problem,
                             const std::vector<State> &states,
                             const HeuristicOptions &options,
                             std::vector<double> &h_out);

} // namespace mtplan
