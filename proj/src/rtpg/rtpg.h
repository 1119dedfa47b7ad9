#pragma once

#include "rtpg/cost_function.h"
#include "state/state.h"

#include <functional>
#include <string>
#include <vector>

namespace mtplan {

constexpr long LOOKAHEAD_INF = -1;

struct RtpgOptions {
    // How far to keep propagating after every goal first becomes reachable:
    // 0 stops immediately, k runs k extra relaxation sweeps over the events
    // pending at that point, LOOKAHEAD_INF runs to the fixpoint.
    long lookahead = LOOKAHEAD_INF;
    // true: precondition costs combine by sum; false: by max.
    bool sum_propagation = true;
};

// Relaxed reachability graph built forward from one search state. Delete
// effects and resource interactions are ignored; add effects are scheduled at
// their real offsets, so every fact gets a cost-over-time curve telling how
// cheaply it can be achieved by each time point.
class Rtpg {
public:
    Rtpg(const Problem &problem, const State &state, const RtpgOptions &options);

    const Problem &problem() const { return *problem_; }
    const RtpgOptions &options() const { return options_; }

    double seed_time() const { return seed_time_; }

    const CostFunction &fact(PredId p) const { return facts_[p]; }
    double fact_cost_at(PredId p, double t) const { return facts_[p].cost_at(t); }

    // Combined cost of the action's logical preconditions at time t
    // (+inf if any is unreachable by t). Resource conditions are relaxed away.
    double action_cost_at(const GroundAction &action, double t) const;

    // Duration the graph assumed for this action (evaluated once against the
    // seed state's resource levels); < 0 if it could not be evaluated.
    double action_duration(int action_id) const { return durations_[action_id]; }

    // True if every goal is achievable strictly before its deadline.
    bool goals_reachable() const { return goals_reachable_; }

    // Earliest time at which every goal has a finite cost (+inf if never).
    double tau_first() const { return tau_first_; }

    // Latest breakpoint time the propagation produced.
    double tau_last() const { return tau_last_; }

    // "fact,time,cost,supporter" lines, facts in id order.
    std::string to_csv() const;

    // Test hook: called once per processed event that improved a curve.
    using Observer =
        std::function<void(PredId fact, double time, double cost, int supporter)>;
    static void set_build_observer(Observer obs);

private:
    struct GraphEvent {
        double time;
        long seq;
        PredId pred;
        double cost;
        int supporter;
    };

    void build(const State &state);
    void apply_action(int action_id, double t);
    bool all_goals_reachable() const;
    double max_goal_deadline() const;

    const Problem *problem_;
    RtpgOptions options_;
    double seed_time_ = 0.0;
    std::vector<CostFunction> facts_;
    std::vector<double> durations_;
    std::vector<std::vector<int>> actions_by_condition_;
    std::vector<GraphEvent> heap_;
    long next_seq_ = 0;
    bool goals_reachable_ = false;
    double tau_first_ = INF;
    double tau_last_ = 0.0;
};

} // namespace mtplan
