#pragma once

#include "state/plan.h"

#include <string>
#include <vector>

namespace mtplan {

// A point on a step's timeline: dispatch time of `step` plus `offset`.
// step == INIT_NODE is the (virtual) initial state pinned at time 0;
// step == GOAL_NODE is the (virtual) goal consumer.
constexpr int INIT_NODE = -1;
constexpr int GOAL_NODE = -2;

struct OcPoint {
    int step = INIT_NODE;
    double offset = 0.0;
};

// Supplier's delivery point supports `pred` at the consumer's start
// (or "forever" for the goal consumer).
struct OcLink {
    OcPoint from;
    int to_step = GOAL_NODE;
    PredId pred = -1;
};

// Temporal constraint: time(from) <= time(to).
struct OcOrdering {
    OcPoint from;
    OcPoint to;
};

// Order-constrained plan: the fixed dispatch times of the input plan are
// replaced by causal links plus the ordering constraints needed to keep any
// consistent dispatch executable. `earliest` is the minimal consistent
// schedule (longest paths from the initial node).
struct OcPlan {
    std::vector<PlanStep> steps; // original dispatch times retained
    std::vector<OcLink> links;
    std::vector<OcOrdering> orderings;
    std::vector<double> earliest;
    double pc_makespan = 0.0;
    double oc_makespan = 0.0;
};

// Converts a valid position-constrained plan greedily: each condition gets
// the earliest achiever not invalidated before use, threats are resolved in
// the direction the input plan already witnesses, and interfering effect
// pairs, protected windows and resource-access windows are ordered so the
// transition engine accepts any consistent dispatch. Throws std::logic_error
// if the input plan is not actually executable.
OcPlan partialize(const Plan &plan, const Problem &problem);

// The earliest-dispatch schedule as a plain plan (steps sorted by time,
// original order among ties).
Plan oc_schedule(const OcPlan &oc);

// Structural audit plus engine replay: every condition and goal has exactly
// one link from a real achiever, the ordering constraints provably keep
// deleters away from every link and conflicting resource windows apart
// (longest-path implication), and the earliest dispatch replays through the
// transition engine to a goal state.
ValidationResult validate_oc(const OcPlan &oc, const Problem &problem);

// Graphviz rendering: solid edges = causal links, dashed = orderings.
std::string oc_to_dot(const OcPlan &oc, const Problem &problem);

} // namespace mtplan
