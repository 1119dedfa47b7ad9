#ifndef STATE_STATE_H
#define STATE_STATE_H

#include "model/problem.h"

#include <cstdint>
#include <memory>
#include <vector>

namespace mtplan {

enum class EventKind { Delete, Add, Update, EndPersist };

// A scheduled change. Add/Delete/EndPersist carry a predicate; Update carries
// a resource update whose amount is evaluated when the event fires.
struct Event {
    double time = 0.0;
    EventKind kind = EventKind::Add;
    PredId pred = -1;
    ResId res = -1;
    UpdateOp op = UpdateOp::Assign;
    ExprPtr amount;
    int source_action = -1; // ground action id; -1 for initial events
    int source_update = -1; // index into the action's updates
    int owner = 0;          // application token (prefix step count)
    long seq = 0;           // global enqueue order, breaks time ties
};

// A protected persistent condition: pred may not be deleted before `until`.
struct Protection {
    PredId pred;
    double until;
    int owner;
};

// Live resource-access window for interference checking: `res` is read
// (change == false) or written (change == true) by a still-running action
// until `until`.
struct ResourceWindow {
    ResId res;
    bool change;
    double until;
    int owner;
};

// Applied-action chain shared between states (cheap successor copies).
struct PrefixStep {
    std::shared_ptr<const PrefixStep> parent;
    int action_id;
    double start;
    double duration;
    int index; // 0-based position in the plan
};

struct State {
    double t = 0.0;
    std::vector<std::pair<PredId, double>> facts; // sorted by pred; value = achievement time
    std::vector<double> resources;
    std::vector<Protection> protections; // sorted by (pred, until, owner)
    std::vector<Event> queue;            // sorted by (time, seq)
    std::vector<ResourceWindow> windows; // live windows only

    std::shared_ptr<const PrefixStep> prefix;
    int steps = 0;
    double g_cost = 0.0;
    // Latest end of any applied action (the plan-so-far's makespan). Unlike
    // the event queue this also covers actions whose effects were all
    // instantaneous.
    double makespan = 0.0;
    long next_seq = 0;

    bool has_fact(PredId p) const;
    double fact_time(PredId p) const; // -inf if absent
    // Latest scheduled event time, or t when the queue is empty.
    double latest_event_time() const;

    // Content identity for duplicate detection: facts (with achievement
    // times), resources, protections, queue order and payloads, and live
    // windows. The clock t, prefix and g_cost are excluded.
    uint64_t content_hash() const;
    bool content_equal(const State &other) const;
};

State make_initial_state(const Problem &problem);

// True iff every goal is satisfied: the goal fact is in P with achievement
// time strictly before its deadline and no pending delete, or a pending add
// achieves it strictly before the deadline with no pending delete.
bool goal_satisfied(const State &state, const Goal &goal);
bool goals_satisfied(const State &state, const Problem &problem);

// Why an action is not applicable (for diagnostics / the validator).
enum class Applicability {
    Ok,
    MissingCondition,
    ResourceCondition,
    ContradictsQueue,   // interference rule 1
    ViolatesProtection, // interference rule 2
    DeleteUnderway,     // interference rule 3
    ResourceConflict,   // interference rule 4
    BadDuration,
};

Applicability applicability(const State &state, const GroundAction &action);
inline bool applicable(const State &state, const GroundAction &action) {
    return applicability(state, action) == Applicability::Ok;
}
const char *applicability_name(Applicability a);

// Applies `action` at state.t. Pre: applicable. Instant effects and updates
// hit P/M immediately (deletes before adds); delayed ones are queued;
// persistent conditions are protected until their window ends.
State apply(const State &state, const GroundAction &action, const Problem &problem);

// Advances to the earliest queued event time and fires every event scheduled
// at that instant: deletes, then adds, then resource updates in enqueue
// order, then end-persist removals. Pre: queue nonempty.
State advance_time(const State &state, const Problem &problem);

// How an action uses one resource, as offsets from its start: `change_until`
// is the latest write, `access_until` the latest read or write (condition
// windows, update amounts and the duration expression all count as reads).
struct ResourceUse {
    ResId res;
    bool changes = false;
    bool accesses = false;
    double change_until = 0.0;
    double access_until = 0.0;
};

// All resources the action touches, sorted by resource id, with the duration
// already resolved.
std::vector<ResourceUse> resource_uses(const GroundAction &action, double duration);

} // namespace mtplan

#endif
