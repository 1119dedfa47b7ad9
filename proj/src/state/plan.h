#pragma once

#include "state/state.h"

#include <string>
#include <vector>

namespace mtplan {

// A position-constrained plan: every step carries an absolute dispatch time.
struct PlanStep {
    int action_id = -1;
    double start = 0.0;
    double duration = 0.0;
};

struct Plan {
    std::vector<PlanStep> steps;

    double makespan() const;
    double exec_cost(const Problem &problem) const;
    double objective(const Problem &problem, double alpha) const;
};

// Reconstruct the plan recorded in a state's prefix chain, earliest first.
Plan plan_from_state(const State &state);

struct ValidationResult {
    bool ok = false;
    std::string error;
    double makespan = 0.0;
};

// Replays the plan through the transition engine: every step must be
// applicable at its dispatch time (after all earlier events have fired), its
// recomputed duration must match the recorded one within `tol`, and the final
// state must satisfy every goal before its deadline.
ValidationResult validate_plan(const Plan &plan, const Problem &problem,
                               double tol = 1e-6);

// One line per step: "<start>: (<name> <args>) [<duration>]", three decimals.
std::string format_plan(const Plan &plan, const Problem &problem);

} // namespace mtplan
