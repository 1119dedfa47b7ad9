#pragma once

#include <iosfwd>
#include <string>

#include "rtpg/rtpg.h"

namespace mtplan {

// Everything a solver run needs, as plain data so tests can drive the CLI
// without a process boundary.
struct RunConfig {
    std::string domain_path;
    std::string problem_path;
    // < 0 selects automatically: the problem metric's tradeoff when it has
    // one, otherwise 0.5.
    double alpha = -1.0;
    long lookahead = LOOKAHEAD_INF;
    bool sum_propagation = true;
    bool adjust_mutex = false;
    bool adjust_resource = true;
    bool partialize_plan = true;      // also emit the order-constrained form
    double timeout_seconds = 0.0;     // 0 = unlimited
    std::string format = "plan";      // plan | json | dot
    bool parallel_eval = true;
};

// Solve and emit. Returns the process exit status: 0 solved, 1 no plan
// (unsolvable or a limit was hit), 2 unusable input. Diagnostics go to
// `err`; the emitted plan goes to `out` and is byte-deterministic for a
// given config and inputs.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

// Replay a plan file (in the emitted format) against the domain/problem.
// Returns 0 when the plan is valid, 1 when the replay or a goal fails
// (reporting the first violation and its time), 2 when the plan file or the
// model files are unusable.
int validate(const std::string &domain_path, const std::string &problem_path,
             const std::string &plan_path, std::ostream &out,
             std::ostream &err);

} // namespace mtplan
