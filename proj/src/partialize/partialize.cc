#include "partialize/partialize.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

using namespace std;

namespace mtplan {

namespace {

constexpr double EPS = 1e-7;

// one add or delete of a predicate somewhere in the plan
struct Occurrence {
    int node; // INIT_NODE or step index
    PredId pred;
    double offset;   // from the node's dispatch (absolute for INIT_NODE)
    double abs_time; // time in the input schedule
    bool queued;     // fires via the event queue (delayed or timed initial)
    double sub;      // within-instant processing rank, see seq_before
};

// The engine's order at one instant: initial facts are already present,
// then the event queue fires (deletes before adds), then the actions
// dispatched there apply in sequence, each checking its conditions before
// its immediate effects. Ties between simultaneous occurrences are decided
// by this rank, not by timestamp.
constexpr double SUB_INIT = -2.0;
constexpr double SUB_QUEUED_DEL = 0.0;
constexpr double SUB_QUEUED_ADD = 1.0;
double sub_check(int step) { return 10.0 + 4.0 * step; }
double sub_start_del(int step) { return 11.0 + 4.0 * step; }
double sub_start_add(int step) { return 12.0 + 4.0 * step; }

bool seq_before(double t1, double s1, double t2, double s2) {
    if (t1 < t2 - EPS)
        return true;
    if (t1 > t2 + EPS)
        return false;
    return s1 < s2;
}
bool seq_before(const Occurrence &a, const Occurrence &b) {
    return seq_before(a.abs_time, a.sub, b.abs_time, b.sub);
}

// what one step requires of one predicate (conditions on the same predicate
// are merged: the longest hold window wins)
struct Requirement {
    PredId pred;
    double hold_off; // 0 = consumed instantaneously at start
    bool persistent;
};

struct Converter {
    const Problem &problem;
    vector<PlanStep> steps; // sorted by (start, original order)
    vector<double> starts;
    vector<double> durs;
    vector<Occurrence> adds;
    vector<Occurrence> dels;
    vector<OcOrdering> edges;
    vector<OcLink> links;

    explicit Converter(const Plan &plan, const Problem &prob) : problem(prob) {
        steps = plan.steps;
        stable_sort(steps.begin(), steps.end(),
                    [](const PlanStep &a, const PlanStep &b) {
                        return a.start < b.start;
                    });
        for (const auto &s : steps) {
            starts.push_back(s.start);
            durs.push_back(s.duration);
        }
        collect_occurrences();
    }

    double point_time(const OcPoint &p) const {
        return p.step == INIT_NODE ? p.offset : starts[p.step] + p.offset;
    }

    void add_edge(OcPoint from, OcPoint to) {
        if (point_time(from) > point_time(to) + 1e-6)
            throw logic_error("ordering not witnessed by the input plan");
        edges.push_back({from, to});
    }

    // Emit "A is processed before B". A plain <= suffices when a time tie
    // still runs A first (their within-instant ranks agree with the witness);
    // otherwise the edge is tightened by the witness slack so the two points
    // can never collide under any consistent dispatch.
    void add_seq_edge(double at, double asub, OcPoint ap, double bt, double bsub,
                      OcPoint bp) {
        double gap = asub < bsub ? 0.0 : bt - at;
        add_edge({ap.step, ap.offset + gap}, bp);
    }

    void collect_occurrences() {
        for (PredId p : problem.init_facts)
            adds.push_back({INIT_NODE, p, 0.0, 0.0, false, SUB_INIT});
        for (const auto &ev : problem.init_events)
            (ev.add ? adds : dels)
                .push_back({INIT_NODE, ev.pred, ev.time, ev.time, true,
                            ev.add ? SUB_QUEUED_ADD : SUB_QUEUED_DEL});
        for (size_t i = 0; i < steps.size(); ++i) {
            const GroundAction &a = problem.actions[steps[i].action_id];
            for (const auto &e : a.effects) {
                double off = e.offset(durs[i]);
                bool queued = off > EPS;
                double sub = queued
                                 ? (e.add ? SUB_QUEUED_ADD : SUB_QUEUED_DEL)
                                 : (e.add ? sub_start_add((int)i)
                                          : sub_start_del((int)i));
                (e.add ? adds : dels)
                    .push_back({(int)i, e.pred, off, starts[i] + off, queued, sub});
            }
        }
    }

    vector<Requirement> requirements(size_t i) const {
        const GroundAction &a = problem.actions[steps[i].action_id];
        vector<Requirement> reqs;
        for (PredId p : a.cond_preds) {
            Requirement r{p, 0.0, false};
            for (const auto &c : a.conditions) {
                if (c.pred != p || !c.persistent())
                    continue;
                r.persistent = true;
                r.hold_off = max(r.hold_off, c.window_end(durs[i]));
            }
            reqs.push_back(r);
        }
        return reqs;
    }

    // earliest achiever of `pred` (in processing order) delivered before the
    // consumer checks it that no later delete invalidates before that check
    const Occurrence *find_supporter(PredId pred, int consumer, double check_time) const {
        double csub = consumer == GOAL_NODE ? 0.0 : sub_check(consumer);
        const Occurrence *best = nullptr;
        for (const auto &s : adds) {
            if (s.pred != pred)
                continue;
            if (consumer != GOAL_NODE &&
                !seq_before(s.abs_time, s.sub, check_time, csub))
                continue;
            if (best && !seq_before(s, *best))
                continue;
            bool blocked = false;
            for (const auto &d : dels) {
                if (d.pred != pred || d.node == consumer)
                    continue;
                if (!seq_before(s, d))
                    continue; // processed before the delivery: the add wins
                if (consumer == GOAL_NODE ||
                    seq_before(d.abs_time, d.sub, check_time, csub)) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked)
                best = &s;
        }
        return best;
    }

    // demotion/promotion edges keeping every deleter of `pred` clear of the
    // interval the link protects
    void resolve_threats(const OcLink &link, const Occurrence &sup, int consumer,
                         double hold_off, bool persistent) {
        for (const auto &d : dels) {
            if (d.pred != link.pred || d.node == sup.node || d.node == consumer)
                continue;
            if (seq_before(d, sup)) {
                add_seq_edge(d.abs_time, d.sub, {d.node, d.offset}, sup.abs_time,
                             sup.sub, {sup.node, sup.offset});
                continue;
            }
            if (consumer == GOAL_NODE)
                throw logic_error("goal fact deleted after its last achiever");
            if (seq_before(d.abs_time, d.sub, starts[consumer], sub_check(consumer)))
                throw logic_error("chosen achiever is invalidated before use");
            double hold_end = starts[consumer] + hold_off;
            if (d.abs_time < hold_end - EPS)
                throw logic_error("delete inside a condition window in the input plan");
            if (!persistent) {
                add_seq_edge(starts[consumer], sub_check(consumer),
                             {consumer, 0.0}, d.abs_time, d.sub,
                             {d.node, d.offset});
                continue;
            }
            // engine-shaped promotion: if the consumer was applied first its
            // protection window does the policing, otherwise the pending
            // delete must sit past the consumer's end
            bool consumer_first =
                d.node != INIT_NODE &&
                (starts[consumer] < starts[d.node] ||
                 (starts[consumer] == starts[d.node] && consumer < d.node));
            if (consumer_first) {
                add_edge({consumer, 0.0}, {d.node, 0.0});
                add_edge({consumer, hold_off}, {d.node, d.offset});
            } else {
                add_edge({consumer, durs[consumer]}, {d.node, d.offset});
            }
        }
    }

    void build_links() {
        for (size_t i = 0; i < steps.size(); ++i) {
            for (const auto &req : requirements(i)) {
                const Occurrence *sup =
                    find_supporter(req.pred, (int)i, starts[i]);
                if (!sup)
                    throw logic_error("no achiever for a condition of " +
                                      problem.actions[steps[i].action_id].signature());
                links.push_back({{sup->node, sup->offset}, (int)i, req.pred});
                add_seq_edge(sup->abs_time, sup->sub, {sup->node, sup->offset},
                             starts[i], sub_check((int)i), {(int)i, 0.0});
                resolve_threats(links.back(), *sup, (int)i, req.hold_off,
                                req.persistent);
            }
        }
        for (const auto &g : problem.goals) {
            const Occurrence *sup = find_supporter(g.pred, GOAL_NODE, INF);
            if (!sup)
                throw logic_error("no achiever for goal " +
                                  problem.pred_names[g.pred]);
            links.push_back({{sup->node, sup->offset}, GOAL_NODE, g.pred});
            resolve_threats(links.back(), *sup, GOAL_NODE, 0.0, false);
        }
    }

    // contradicting queued effects may never be co-pending: the event the
    // input plan fired first must land before the other action starts
    void order_contradicting_events() {
        for (const auto &a : adds) {
            if (!a.queued)
                continue;
            for (const auto &d : dels) {
                if (!d.queued || d.pred != a.pred || d.node == a.node)
                    continue;
                if (a.node == INIT_NODE) {
                    add_edge({INIT_NODE, a.offset}, {d.node, 0.0});
                } else if (d.node == INIT_NODE) {
                    add_edge({INIT_NODE, d.offset}, {a.node, 0.0});
                } else {
                    bool a_first = starts[a.node] < starts[d.node] ||
                                   (starts[a.node] == starts[d.node] &&
                                    a.node < d.node);
                    if (a_first)
                        add_edge({a.node, a.offset}, {d.node, 0.0});
                    else
                        add_edge({d.node, d.offset}, {a.node, 0.0});
                }
            }
        }
    }

    // conflicting resource windows stay disjoint, in the order the input
    // plan ran them
    void order_resource_windows() {
        vector<vector<ResourceUse>> uses;
        uses.reserve(steps.size());
        for (size_t i = 0; i < steps.size(); ++i)
            uses.push_back(
                resource_uses(problem.actions[steps[i].action_id], durs[i]));
        for (size_t i = 0; i < steps.size(); ++i) {
            for (size_t j = i + 1; j < steps.size(); ++j) {
                for (const auto &ui : uses[i]) {
                    for (const auto &uj : uses[j]) {
                        if (ui.res != uj.res)
                            continue;
                        if (!(ui.changes || uj.changes))
                            continue; // concurrent reads are fine
                        // steps are in application order: i ran first
                        double window = uj.changes ? ui.access_until
                                                   : ui.change_until;
                        add_edge({(int)i, window}, {(int)j, 0.0});
                    }
                }
            }
        }
    }

    void dedupe_edges() {
        sort(edges.begin(), edges.end(), [](const OcOrdering &a, const OcOrdering &b) {
            if (a.from.step != b.from.step)
                return a.from.step < b.from.step;
            if (a.from.offset != b.from.offset)
                return a.from.offset < b.from.offset;
            if (a.to.step != b.to.step)
                return a.to.step < b.to.step;
            return a.to.offset < b.to.offset;
        });
        edges.erase(unique(edges.begin(), edges.end(),
                           [](const OcOrdering &a, const OcOrdering &b) {
                               return a.from.step == b.from.step &&
                                      a.from.offset == b.from.offset &&
                                      a.to.step == b.to.step &&
                                      a.to.offset == b.to.offset;
                           }),
                    edges.end());
    }

    vector<double> earliest_dispatch() const {
        vector<double> x(steps.size(), 0.0);
        for (size_t pass = 0; pass <= steps.size() + 1; ++pass) {
            bool changed = false;
            for (const auto &e : edges) {
                if (e.to.step < 0)
                    continue; // upper bounds; witnessed by construction
                double from_time = e.from.step == INIT_NODE
                                       ? e.from.offset
                                       : x[e.from.step] + e.from.offset;
                double lb = from_time - e.to.offset;
                if (lb > x[e.to.step] + 1e-12) {
                    if (pass > steps.size())
                        throw logic_error("cyclic ordering constraints");
                    x[e.to.step] = lb;
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        return x;
    }
};

} // namespace

OcPlan partialize(const Plan &plan, const Problem &problem) {
    ValidationResult pc = validate_plan(plan, problem);
    if (!pc.ok)
        throw logic_error("cannot partialize an invalid plan: " + pc.error);

    Converter conv(plan, problem);
    conv.build_links();
    conv.order_contradicting_events();
    conv.order_resource_windows();
    conv.dedupe_edges();

    OcPlan oc;
    oc.steps = conv.steps;
    oc.earliest = conv.earliest_dispatch();
    oc.links = std::move(conv.links);
    oc.orderings = std::move(conv.edges);
    oc.pc_makespan = pc.makespan;
    for (size_t i = 0; i < oc.steps.size(); ++i)
        oc.oc_makespan = max(oc.oc_makespan, oc.earliest[i] + oc.steps[i].duration);
    return oc;
}

Plan oc_schedule(const OcPlan &oc) {
    Plan plan;
    for (size_t i = 0; i < oc.steps.size(); ++i)
        plan.steps.push_back(
            {oc.steps[i].action_id, oc.earliest[i], oc.steps[i].duration});
    stable_sort(plan.steps.begin(), plan.steps.end(),
                [](const PlanStep &a, const PlanStep &b) {
                    return a.start < b.start;
                });
    return plan;
}

namespace {

// longest-path closure over {init} + steps; entry [a][b] is the proven lower
// bound on dispatch(b) - dispatch(a), -inf if unrelated
vector<vector<double>> implication_matrix(const OcPlan &oc) {
    size_t n = oc.steps.size() + 1; // node 0 = init
    vector<vector<double>> dist(n, vector<double>(n, -INF));
    for (size_t i = 0; i < n; ++i)
        dist[i][i] = 0.0;
    auto id = [](int step) { return static_cast<size_t>(step + 1); };
    for (const auto &e : oc.orderings) {
        if (e.from.step == GOAL_NODE || e.to.step == GOAL_NODE)
            continue;
        double w = e.from.offset - e.to.offset;
        size_t a = id(e.from.step), b = id(e.to.step);
        dist[a][b] = max(dist[a][b], w);
    }
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (dist[i][k] <= -INF)
                continue;
            for (size_t j = 0; j < n; ++j)
                if (dist[k][j] > -INF)
                    dist[i][j] = max(dist[i][j], dist[i][k] + dist[k][j]);
        }
    return dist;
}

} // namespace

ValidationResult validate_oc(const OcPlan &oc, const Problem &problem) {
    ValidationResult r;
    // occurrence/requirement bookkeeping against the original assignment
    Converter orig(Plan{oc.steps}, problem);

    // 1. exactly one link per merged condition and per goal
    for (size_t i = 0; i < oc.steps.size(); ++i) {
        for (const auto &req : orig.requirements(i)) {
            int count = 0;
            for (const auto &l : oc.links)
                if (l.to_step == (int)i && l.pred == req.pred)
                    ++count;
            if (count != 1) {
                r.error = "condition of step " + to_string(i) + " has " +
                          to_string(count) + " links";
                return r;
            }
        }
    }
    for (const auto &g : problem.goals) {
        int count = 0;
        for (const auto &l : oc.links)
            if (l.to_step == GOAL_NODE && l.pred == g.pred)
                ++count;
        if (count != 1) {
            r.error = "goal " + problem.pred_names[g.pred] + " has " +
                      to_string(count) + " links";
            return r;
        }
    }

    // 2. every link's supplier really delivers the predicate at that offset
    for (const auto &l : oc.links) {
        bool delivers = false;
        for (const auto &a : orig.adds)
            if (a.node == l.from.step && a.pred == l.pred &&
                fabs(a.offset - l.from.offset) <= EPS)
                delivers = true;
        if (!delivers) {
            r.error = "link supplier does not add " + problem.pred_names[l.pred];
            return r;
        }
    }

    // 3. ordering constraints provably protect every link from every deleter
    auto dist = implication_matrix(oc);
    auto id = [](int step) { return static_cast<size_t>(step + 1); };
    for (size_t i = 0; i < dist.size(); ++i)
        if (dist[i][i] > EPS) {
            r.error = "ordering constraints are cyclic";
            return r;
        }
    for (const auto &l : oc.links) {
        double hold = 0.0;
        if (l.to_step >= 0)
            for (const auto &req : orig.requirements(l.to_step))
                if (req.pred == l.pred)
                    hold = req.hold_off;
        for (const auto &d : orig.dels) {
            if (d.pred != l.pred || d.node == l.from.step || d.node == l.to_step)
                continue;
            bool demoted = dist[id(d.node)][id(l.from.step)] >=
                           d.offset - l.from.offset - EPS;
            bool promoted = l.to_step >= 0 &&
                            dist[id(l.to_step)][id(d.node)] >= hold - d.offset - EPS;
            if (!demoted && !promoted) {
                r.error = "unprotected link for " + problem.pred_names[l.pred];
                return r;
            }
        }
    }

    // 4. conflicting resource windows provably stay disjoint
    for (size_t i = 0; i < oc.steps.size(); ++i) {
        auto ui = resource_uses(problem.actions[oc.steps[i].action_id],
                                oc.steps[i].duration);
        for (size_t j = i + 1; j < oc.steps.size(); ++j) {
            auto uj = resource_uses(problem.actions[oc.steps[j].action_id],
                                    oc.steps[j].duration);
            for (const auto &a : ui)
                for (const auto &b : uj) {
                    if (a.res != b.res || !(a.changes || b.changes))
                        continue;
                    double wi = b.changes ? a.access_until : a.change_until;
                    double wj = a.changes ? b.access_until : b.change_until;
                    bool i_first = dist[id((int)i)][id((int)j)] >= wi - EPS;
                    bool j_first = dist[id((int)j)][id((int)i)] >= wj - EPS;
                    if (!i_first && !j_first) {
                        r.error = "overlapping use of resource " +
                                  problem.res_names[a.res];
                        return r;
                    }
                }
        }
    }

    // 5. the earliest dispatch satisfies every constraint and replays cleanly
    for (const auto &e : oc.orderings) {
        auto at = [&](const OcPoint &p) {
            return p.step == INIT_NODE ? p.offset
                                       : oc.earliest[p.step] + p.offset;
        };
        if (e.from.step == GOAL_NODE || e.to.step == GOAL_NODE)
            continue;
        if (at(e.from) > at(e.to) + 1e-6) {
            r.error = "earliest dispatch violates an ordering constraint";
            return r;
        }
    }
    ValidationResult replay = validate_plan(oc_schedule(oc), problem);
    if (!replay.ok) {
        r.error = "earliest dispatch does not replay: " + replay.error;
        return r;
    }
    r.ok = true;
    r.makespan = oc.oc_makespan;
    return r;
}

string oc_to_dot(const OcPlan &oc, const Problem &problem) {
    auto node_name = [](int step) {
        if (step == INIT_NODE)
            return string("init");
        if (step == GOAL_NODE)
            return string("goal");
        return "s" + to_string(step);
    };
    char buf[128];
    string out = "digraph oc {\n  rankdir=LR;\n"
                 "  init [shape=box];\n  goal [shape=box];\n";
    for (size_t i = 0; i < oc.steps.size(); ++i) {
        snprintf(buf, sizeof(buf), "  s%zu [label=\"%s\\n[%.3f] @%.3f\"];\n", i,
                 problem.actions[oc.steps[i].action_id].signature().c_str(),
                 oc.steps[i].duration, oc.earliest[i]);
        out += buf;
    }
    for (const auto &l : oc.links) {
        out += "  " + node_name(l.from.step) + " -> " + node_name(l.to_step) +
               " [label=\"" + problem.pred_names[l.pred] + "\"];\n";
    }
    for (const auto &e : oc.orderings) {
        snprintf(buf, sizeof(buf),
                 "  %s -> %s [style=dashed,label=\"+%.3f<=+%.3f\"];\n",
                 node_name(e.from.step).c_str(), node_name(e.to.step).c_str(),
                 e.from.offset, e.to.offset);
        out += buf;
    }
    out += "}\n";
    return out;
}

} // namespace mtplan
