#pragma once

#include "rtpg/rtpg.h"
#include "state/state.h"

#include <string>
#include <vector>

namespace mtplan {

struct HeuristicOptions {
    double alpha = 0.5;
    long lookahead = LOOKAHEAD_INF;
    bool sum_propagation = true;
    // false: evaluate goal cost curves directly; true: extract a relaxed plan
    bool use_relaxed_plan = true;
    bool adjust_mutex = false;
    bool adjust_resource = false;
};

// Objective already committed by a state: the weighted mix of the cost spent
// so far and the plan-so-far's makespan (the latest end of any applied
// action).
double committed_objective(const State &state, double alpha);

// Direct estimate: scan the goal cost curves for the consideration time that
// minimizes alpha * combined-goal-cost + (1-alpha) * extra-makespan beyond
// `committed`. Goals count only if achieved strictly before their deadlines.
// Returns +inf when some goal is unreachable; *best_time (optional) receives
// the minimizing consideration time.
double direct_heuristic(const Rtpg &graph, double alpha, double committed,
                        double *best_time = nullptr);

// Slack = goal deadline minus earliest relaxed achievement time.
enum class SlackMode { Min, Max, Sum };
double slack_estimate(const Rtpg &graph, SlackMode mode);

struct RelaxedStep {
    int action_id = -1;
    double start = 0.0;    // earliest start suggested by the graph
    double duration = 0.0; // duration the graph assumed
};

struct RelaxedLink {
    int from_step = -1; // supplying step index, -1 = initial state / queue
    int to_step = -1;   // consuming step index, -1 = a top-level goal
    PredId pred = -1;
    double offset = 0.0; // delivery offset from the supplier's start
};

struct RelaxedPlan {
    bool found = false;
    std::vector<RelaxedStep> steps;
    std::vector<RelaxedLink> links;
    // serialization edges (earlier index runs to completion first)
    std::vector<std::pair<int, int>> orderings;
    double total_cost = 0.0; // summed execution costs
    double end_time = 0.0;   // absolute end of the schedule respecting links
                             // and orderings
};

// Walks the goal cost curves backwards, committing one supporting action per
// open (sub)goal. Options for a goal are the breakpoints of its curve before
// the deadline; each is scored by alpha * cost + (1-alpha) * resulting
// schedule end, and existing steps are reused before new ones are added.
// When `adjust_mutex` is set, statically interfering step pairs are
// serialized and candidate scoring uses the serialized schedule end.
RelaxedPlan extract_relaxed_plan(const Rtpg &graph, const State &state,
                                 const HeuristicOptions &options);

// Extra cost needed to cover the relaxed plan's net resource consumption that
// neither the current levels nor the plan's own production can supply, using
// the strongest producer of each resource. +inf when a deficit has no
// producer at all.
double resource_adjustment(const Rtpg &graph, const State &state,
                           const RelaxedPlan &plan);

struct HeuristicValue {
    double h = INF;       // weighted estimate beyond the committed objective
    bool reachable = false;
    RelaxedPlan plan;     // populated when a relaxed plan was extracted
};

// Full pipeline: goal test, graph build, direct or relaxed-plan estimate,
// optional adjustments. Returns h = 0 for goal states and +inf when some
// goal cannot be reached before its deadline.
HeuristicValue evaluate_heuristic(const Problem &problem, const State &state,
                                  const HeuristicOptions &options);

} // namespace mtplan
