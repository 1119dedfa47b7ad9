#include "state/state.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>

using namespace std;

namespace mtplan {

namespace {

struct FactLess {
    bool operator()(const pair<PredId, double> &a, PredId b) const {
        return a.first < b;
    }
};

vector<pair<PredId, double>>::const_iterator
find_fact(const vector<pair<PredId, double>> &facts, PredId p) {
    auto it = lower_bound(facts.begin(), facts.end(), p, FactLess());
    if (it != facts.end() && it->first == p)
        return it;
    return facts.end();
}

void set_fact(vector<pair<PredId, double>> &facts, PredId p, double time) {
    auto it = lower_bound(facts.begin(), facts.end(), p, FactLess());
    if (it != facts.end() && it->first == p)
        it->second = time;
    else
        facts.insert(it, {p, time});
}

void erase_fact(vector<pair<PredId, double>> &facts, PredId p) {
    auto it = lower_bound(facts.begin(), facts.end(), p, FactLess());
    if (it != facts.end() && it->first == p)
        facts.erase(it);
}

void insert_event(vector<Event> &queue, Event e) {
    auto pos = upper_bound(queue.begin(), queue.end(), e,
                           [](const Event &a, const Event &b) {
                               if (a.time != b.time)
                                   return a.time < b.time;
                               return a.seq < b.seq;
                           });
    queue.insert(pos, std::move(e));
}

bool cmp_holds(double lhs, Cmp cmp, double rhs) {
    switch (cmp) {
    case Cmp::Lt: return lhs < rhs;
    case Cmp::Le: return lhs <= rhs;
    case Cmp::Gt: return lhs > rhs;
    case Cmp::Ge: return lhs >= rhs;
    case Cmp::Eq: return lhs == rhs;
    }
    return false;
}

void apply_update(vector<double> &resources, ResId res, UpdateOp op, double amount) {
    switch (op) {
    case UpdateOp::Assign: resources[res] = amount; break;
    case UpdateOp::Increase: resources[res] += amount; break;
    case UpdateOp::Decrease: resources[res] -= amount; break;
    case UpdateOp::ScaleUp: resources[res] *= amount; break;
    case UpdateOp::ScaleDown:
        if (amount == 0.0)
            throw EvalError("scale-down by zero");
        resources[res] /= amount;
        break;
    }
}

} // namespace

vector<ResourceUse> resource_uses(const GroundAction &action, double duration) {
    vector<ResourceUse> uses;
    auto slot = [&uses](ResId r) -> ResourceUse & {
        for (auto &u : uses)
            if (u.res == r)
                return u;
        uses.push_back(ResourceUse{r, false, false, 0.0, 0.0});
        return uses.back();
    };
    auto access = [&](ResId r, double off) {
        ResourceUse &u = slot(r);
        u.accesses = true;
        u.access_until = max(u.access_until, off);
    };
    vector<ResId> refs;
    if (action.duration) {
        action.duration->collect_resources(refs);
        for (ResId r : refs)
            access(r, 0.0);
    }
    for (const auto &c : action.res_conditions) {
        double end = c.window_end(duration);
        access(c.res, end);
        refs.clear();
        c.rhs->collect_resources(refs);
        for (ResId r : refs)
            access(r, end);
    }
    for (const auto &u : action.updates) {
        double off = u.offset(duration);
        ResourceUse &use = slot(u.res);
        use.changes = true;
        use.change_until = max(use.change_until, off);
        access(u.res, off);
        refs.clear();
        u.rhs->collect_resources(refs);
        for (ResId r : refs)
            access(r, off);
    }
    sort(uses.begin(), uses.end(),
         [](const ResourceUse &a, const ResourceUse &b) { return a.res < b.res; });
    return uses;
}

bool State::has_fact(PredId p) const { return find_fact(facts, p) != facts.end(); }

double State::fact_time(PredId p) const {
    auto it = find_fact(facts, p);
    return it == facts.end() ? -INF : it->second;
}

double State::latest_event_time() const {
    return queue.empty() ? t : queue.back().time;
}

namespace {
inline void hash_mix(uint64_t &h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}
inline uint64_t double_bits(double d) {
    uint64_t u;
    memcpy(&u, &d, sizeof(u));
    return u;
}
} // namespace

uint64_t State::content_hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto &[p, time] : facts) {
        hash_mix(h, static_cast<uint64_t>(p));
        hash_mix(h, double_bits(time));
    }
    for (double r : resources)
        hash_mix(h, double_bits(r));
    for (const auto &pr : protections) {
        hash_mix(h, static_cast<uint64_t>(pr.pred) | (1ULL << 40));
        hash_mix(h, double_bits(pr.until));
    }
    for (const auto &e : queue) {
        hash_mix(h, double_bits(e.time));
        hash_mix(h, static_cast<uint64_t>(e.kind));
        hash_mix(h, static_cast<uint64_t>(e.pred + 1));
        hash_mix(h, static_cast<uint64_t>(e.res + 1));
        hash_mix(h, static_cast<uint64_t>(e.op));
        hash_mix(h, static_cast<uint64_t>(e.source_action + 1));
        hash_mix(h, static_cast<uint64_t>(e.source_update + 1));
    }
    for (const auto &w : windows) {
        hash_mix(h, static_cast<uint64_t>(w.res) | (1ULL << 41));
        hash_mix(h, static_cast<uint64_t>(w.change));
        hash_mix(h, double_bits(w.until));
    }
    return h;
}

bool State::content_equal(const State &other) const {
    if (facts != other.facts || resources != other.resources)
        return false;
    if (protections.size() != other.protections.size() ||
        queue.size() != other.queue.size() || windows.size() != other.windows.size())
        return false;
    for (size_t i = 0; i < protections.size(); ++i) {
        const Protection &a = protections[i], &b = other.protections[i];
        if (a.pred != b.pred || a.until != b.until)
            return false;
    }
    for (size_t i = 0; i < queue.size(); ++i) {
        const Event &a = queue[i], &b = other.queue[i];
        if (a.time != b.time || a.kind != b.kind || a.pred != b.pred ||
            a.res != b.res || a.op != b.op || a.source_action != b.source_action ||
            a.source_update != b.source_update)
            return false;
    }
    for (size_t i = 0; i < windows.size(); ++i) {
        const ResourceWindow &a = windows[i], &b = other.windows[i];
        if (a.res != b.res || a.change != b.change || a.until != b.until)
            return false;
    }
    return true;
}

State make_initial_state(const Problem &problem) {
    State s;
    s.resources = problem.init_resources;
    s.resources.resize(problem.res_names.size(), 0.0);
    for (PredId p : problem.init_facts)
        set_fact(s.facts, p, 0.0);
    for (const auto &ev : problem.init_events) {
        Event e;
        e.time = ev.time;
        e.kind = ev.add ? EventKind::Add : EventKind::Delete;
        e.pred = ev.pred;
        e.owner = 0;
        e.seq = s.next_seq++;
        insert_event(s.queue, std::move(e));
    }
    return s;
}

bool goal_satisfied(const State &state, const Goal &goal) {
    for (const auto &e : state.queue)
        if (e.kind == EventKind::Delete && e.pred == goal.pred)
            return false;
    double tj = state.fact_time(goal.pred);
    if (tj != -INF && tj < goal.deadline)
        return true;
    for (const auto &e : state.queue)
        if (e.kind == EventKind::Add && e.pred == goal.pred && e.time < goal.deadline)
            return true;
    return false;
}

bool goals_satisfied(const State &state, const Problem &problem) {
    for (const auto &g : problem.goals)
        if (!goal_satisfied(state, g))
            return false;
    return true;
}

Applicability applicability(const State &state, const GroundAction &action) {
    double duration;
    try {
        duration = action.eval_duration(state.resources);
    } catch (const EvalError &) {
        return Applicability::BadDuration;
    }
    if (!(duration > 0.0) || !isfinite(duration))
        return Applicability::BadDuration;

    // 1. logical conditions hold in P (at-end enforced like over-all)
    for (const auto &c : action.conditions)
        if (!state.has_fact(c.pred))
            return Applicability::MissingCondition;

    // 2. resource conditions hold in M
    for (const auto &c : action.res_conditions) {
        double rhs;
        try {
            rhs = c.rhs->evaluate(state.resources);
        } catch (const EvalError &) {
            return Applicability::ResourceCondition;
        }
        if (!cmp_holds(state.resources[c.res], c.cmp, rhs))
            return Applicability::ResourceCondition;
    }

    // 3. interference rule 1: no delayed effect may contradict a queued event
    for (const auto &e : action.effects) {
        double off = e.offset(duration);
        if (off <= 0.0)
            continue; // instantaneous effects are not events
        for (const auto &q : state.queue) {
            if (q.pred != e.pred)
                continue;
            if ((e.add && q.kind == EventKind::Delete) ||
                (!e.add && q.kind == EventKind::Add))
                return Applicability::ContradictsQueue;
        }
    }

    // 4. interference rule 2: no delete before a protected-until point
    for (const auto &e : action.effects) {
        if (e.add)
            continue;
        double delete_time = state.t + e.offset(duration);
        for (const auto &pr : state.protections)
            if (pr.pred == e.pred && delete_time < pr.until)
                return Applicability::ViolatesProtection;
    }

    // 5. interference rule 3: a queued ¬p for a persistent condition p must
    // not fire before this action terminates
    double end_time = state.t + duration;
    for (const auto &c : action.conditions) {
        if (!c.persistent())
            continue;
        for (const auto &q : state.queue)
            if (q.kind == EventKind::Delete && q.pred == c.pred && q.time < end_time)
                return Applicability::DeleteUnderway;
    }

    // 6. interference rule 4: no read/write overlap on resources with
    // still-running actions
    for (const auto &use : resource_uses(action, duration)) {
        for (const auto &w : state.windows) {
            if (w.res != use.res || w.until <= state.t)
                continue;
            if (use.changes || w.change)
                return Applicability::ResourceConflict;
        }
    }
    return Applicability::Ok;
}

const char *applicability_name(Applicability a) {
    switch (a) {
    case Applicability::Ok: return "ok";
    case Applicability::MissingCondition: return "missing condition";
    case Applicability::ResourceCondition: return "resource condition fails";
    case Applicability::ContradictsQueue: return "contradicts queued event";
    case Applicability::ViolatesProtection: return "deletes protected fact";
    case Applicability::DeleteUnderway: return "pending delete of persistent condition";
    case Applicability::ResourceConflict: return "resource access conflict";
    case Applicability::BadDuration: return "bad duration";
    }
    return "?";
}

State apply(const State &state, const GroundAction &action, const Problem &problem) {
    (void)problem;
    assert(applicable(state, action));
    State s = state;
    double duration = action.eval_duration(s.resources);
    int owner = s.steps + 1;

    // instantaneous deletes, then adds
    for (const auto &e : action.effects)
        if (!e.add && e.offset(duration) <= 0.0)
            erase_fact(s.facts, e.pred);
    for (const auto &e : action.effects)
        if (e.add && e.offset(duration) <= 0.0)
            set_fact(s.facts, e.pred, s.t);

    // instantaneous updates, in declaration order
    for (const auto &u : action.updates)
        if (u.offset(duration) <= 0.0)
            apply_update(s.resources, u.res, u.op, u.rhs->evaluate(s.resources));

    // delayed effects and updates become events
    for (const auto &e : action.effects) {
        double off = e.offset(duration);
        if (off <= 0.0)
            continue;
        Event ev;
        ev.time = s.t + off;
        ev.kind = e.add ? EventKind::Add : EventKind::Delete;
        ev.pred = e.pred;
        ev.source_action = action.id;
        ev.owner = owner;
        ev.seq = s.next_seq++;
        insert_event(s.queue, std::move(ev));
    }
    for (size_t i = 0; i < action.updates.size(); ++i) {
        const auto &u = action.updates[i];
        double off = u.offset(duration);
        if (off <= 0.0)
            continue;
        Event ev;
        ev.time = s.t + off;
        ev.kind = EventKind::Update;
        ev.res = u.res;
        ev.op = u.op;
        ev.amount = u.rhs;
        ev.source_action = action.id;
        ev.source_update = static_cast<int>(i);
        ev.owner = owner;
        ev.seq = s.next_seq++;
        insert_event(s.queue, std::move(ev));
    }

    // persistent conditions enter the protected set until their window ends
    for (const auto &c : action.conditions) {
        if (!c.persistent())
            continue;
        double until = s.t + c.window_end(duration);
        Protection pr{c.pred, until, owner};
        auto pos = upper_bound(s.protections.begin(), s.protections.end(), pr,
                               [](const Protection &a, const Protection &b) {
                                   if (a.pred != b.pred)
                                       return a.pred < b.pred;
                                   return a.until < b.until;
                               });
        s.protections.insert(pos, pr);
        Event ev;
        ev.time = until;
        ev.kind = EventKind::EndPersist;
        ev.pred = c.pred;
        ev.source_action = action.id;
        ev.owner = owner;
        ev.seq = s.next_seq++;
        insert_event(s.queue, std::move(ev));
    }

    // register live resource windows for interference rule 4
    for (const auto &use : resource_uses(action, duration)) {
        if (use.changes && use.change_until > 0.0)
            s.windows.push_back({use.res, true, s.t + use.change_until, owner});
        if (use.access_until > 0.0 &&
            !(use.changes && use.change_until >= use.access_until))
            s.windows.push_back({use.res, false, s.t + use.access_until, owner});
    }
    sort(s.windows.begin(), s.windows.end(),
         [](const ResourceWindow &a, const ResourceWindow &b) {
             if (a.res != b.res)
                 return a.res < b.res;
             if (a.change != b.change)
                 return a.change > b.change;
             return a.until < b.until;
         });

    auto step = make_shared<PrefixStep>();
    step->parent = s.prefix;
    step->action_id = action.id;
    step->start = s.t;
    step->duration = duration;
    step->index = s.steps;
    s.prefix = std::move(step);
    s.steps += 1;
    s.g_cost += action.exec_cost;
    s.makespan = max(s.makespan, s.t + duration);
    return s;
}

State advance_time(const State &state, const Problem &problem) {
    (void)problem;
    assert(!state.queue.empty());
    State s = state;
    double te = s.queue.front().time;
    s.t = te;

    size_t n = 0;
    while (n < s.queue.size() && s.queue[n].time == te)
        ++n;
    vector<Event> now(s.queue.begin(), s.queue.begin() + n);
    s.queue.erase(s.queue.begin(), s.queue.begin() + n);

    for (const auto &e : now)
        if (e.kind == EventKind::Delete)
            erase_fact(s.facts, e.pred);
    for (const auto &e : now)
        if (e.kind == EventKind::Add)
            set_fact(s.facts, e.pred, te);
    for (const auto &e : now)
        if (e.kind == EventKind::Update)
            apply_update(s.resources, e.res, e.op, e.amount->evaluate(s.resources));
    for (const auto &e : now) {
        if (e.kind != EventKind::EndPersist)
            continue;
        for (auto it = s.protections.begin(); it != s.protections.end(); ++it) {
            if (it->pred == e.pred && it->until == te && it->owner == e.owner) {
                s.protections.erase(it);
                break;
            }
        }
    }
    s.windows.erase(remove_if(s.windows.begin(), s.windows.end(),
                              [te](const ResourceWindow &w) { return w.until <= te; }),
                    s.windows.end());
    return s;
}

} // namespace mtplan
