#ifndef MODEL_PROBLEM_H
#define MODEL_PROBLEM_H

#include "model/expr.h"

#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace mtplan {

using PredId = int;

constexpr double INF = std::numeric_limits<double>::infinity();

// When a logical condition must hold, relative to the action's start.
// AtEnd is enforced like Over with window [start, end]: the state model has no
// mechanism to test a proposition at a future instant, so the condition is
// required to hold from start through end (sound, possibly stricter).
enum class CondTime { AtStart, OverAll, OverFor, AtEnd };

// When an effect or resource update happens, relative to the action's start.
enum class EffTime { AtStart, AtEnd, AtOffset };

enum class Cmp { Lt, Le, Gt, Ge, Eq };

enum class UpdateOp { Assign, Increase, Decrease, ScaleUp, ScaleDown };

struct Condition {
    PredId pred;
    CondTime when;
    double over_d = 0.0; // only for OverFor

    bool persistent() const { return when != CondTime::AtStart; }
    // Window end relative to start; duration must be the evaluated duration.
    double window_end(double duration) const {
        switch (when) {
        case CondTime::AtStart: return 0.0;
        case CondTime::OverFor: return over_d;
        default: return duration; // OverAll, AtEnd
        }
    }
};

struct Effect {
    PredId pred;
    bool add;
    EffTime when;
    double at_offset = 0.0; // only for AtOffset

    double offset(double duration) const {
        switch (when) {
        case EffTime::AtStart: return 0.0;
        case EffTime::AtEnd: return duration;
        default: return at_offset;
        }
    }
};

struct ResourceCondition {
    ResId res;
    Cmp cmp;
    ExprPtr rhs;
    CondTime when = CondTime::AtStart;
    double over_d = 0.0;

    double window_end(double duration) const {
        switch (when) {
        case CondTime::AtStart: return 0.0;
        case CondTime::OverFor: return over_d;
        default: return duration;
        }
    }
};

struct ResourceUpdate {
    ResId res;
    UpdateOp op;
    ExprPtr rhs;
    EffTime when;
    double at_offset = 0.0;

    double offset(double duration) const {
        switch (when) {
        case EffTime::AtStart: return 0.0;
        case EffTime::AtEnd: return duration;
        default: return at_offset;
        }
    }
};

struct GroundAction {
    int id = -1;
    std::string name;              // schema name
    std::vector<std::string> args; // object names, in parameter order

    ExprPtr duration;            // evaluates > 0 against M
    double duration_const = -1.0; // >= 0 when the duration is constant
    double exec_cost = 1.0;

    std::vector<Condition> conditions;
    std::vector<ResourceCondition> res_conditions;
    std::vector<Effect> effects;
    std::vector<ResourceUpdate> updates;

    // Derived, filled by finalize_problem(): sorted unique predicate sets.
    std::vector<PredId> cond_preds;
    std::vector<PredId> add_preds;
    std::vector<PredId> del_preds;

    // "(name arg1 arg2)"
    std::string signature() const;

    bool has_add(PredId p) const;
    bool has_del(PredId p) const;

    double eval_duration(const std::vector<double> &resources) const {
        if (duration_const >= 0.0)
            return duration_const;
        return duration->evaluate(resources);
    }
};

struct Goal {
    PredId pred;
    double deadline = INF;
};

struct InitEvent {
    PredId pred;
    bool add;
    double time; // > 0
};

struct Problem {
    std::string domain_name;
    std::string problem_name;

    std::vector<std::string> pred_names; // by PredId
    std::vector<std::string> res_names;  // by ResId
    std::unordered_map<std::string, PredId> pred_index;
    std::unordered_map<std::string, ResId> res_index;

    std::vector<GroundAction> actions; // canonical order: (name, args)
    std::vector<PredId> init_facts;    // sorted
    std::vector<InitEvent> init_events;
    std::vector<double> init_resources; // by ResId, default 0
    std::vector<Goal> goals;

    // Optimization metric (minimize w_t * total-time + sum w_r * r).
    bool has_metric = false;
    double metric_time_weight = 0.0;
    std::vector<std::pair<ResId, double>> metric_res_weights;
    // Set by decompile_metric(): suggested cost/makespan tradeoff.
    double metric_alpha = -1.0;

    // Static mutex table (n x n, symmetric, diagonal false).
    std::vector<char> mutex_table;

    int num_preds() const { return static_cast<int>(pred_names.size()); }
    int num_resources() const { return static_cast<int>(res_names.size()); }

    bool mutex(int a, int b) const {
        return mutex_table[static_cast<size_t>(a) * actions.size() + b] != 0;
    }

    PredId pred_id(const std::string &name) const;   // -1 if unknown
    const GroundAction *find_action(const std::string &signature) const;
};

// Sorts actions canonically, rebuilds ids and derived per-action predicate
// sets, sorts init facts, and computes the static mutex table.
void finalize_problem(Problem &problem);

// Two actions are statically mutex iff one deletes a condition or an add
// effect of the other (checked symmetrically); self-pairs excluded.
void compute_static_mutexes(Problem &problem);

// Rewrites every action's exec_cost as the metric-weighted net consumption of
// its statically evaluable resource updates and stores the normalized
// cost/makespan tradeoff in metric_alpha. No-op when the problem has no
// metric.
void decompile_metric(Problem &problem);

} // namespace mtplan

#endif
