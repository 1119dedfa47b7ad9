#include "heuristics/heuristics.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

using namespace std;

namespace mtplan {

double committed_objective(const State &state, double alpha) {
    return alpha * state.g_cost + (1.0 - alpha) * state.makespan;
}

namespace {

// cost of goal g at consideration time t, honoring the strict deadline
double goal_cost_at(const Rtpg &graph, const Goal &g, double t) {
    const CostFunction &cf = graph.fact(g.pred);
    double best = INF;
    for (const auto &bp : cf.breakpoints()) {
        if (bp.time > t || bp.time >= g.deadline)
            break;
        best = bp.cost;
    }
    return best;
}

} // namespace

double direct_heuristic(const Rtpg &graph, double alpha, double committed,
                        double *best_time) {
    const Problem &problem = graph.problem();
    vector<double> candidates;
    for (const auto &g : problem.goals)
        for (const auto &bp : graph.fact(g.pred).breakpoints())
            if (bp.time < g.deadline)
                candidates.push_back(bp.time);
    sort(candidates.begin(), candidates.end());
    candidates.erase(unique(candidates.begin(), candidates.end()),
                     candidates.end());

    double best = INF;
    double best_t = INF;
    for (double t : candidates) {
        double agg = 0.0;
        bool feasible = true;
        for (const auto &g : problem.goals) {
            double c = goal_cost_at(graph, g, t);
            if (c >= INF) {
                feasible = false;
                break;
            }
            if (graph.options().sum_propagation)
                agg += c;
            else
                agg = max(agg, c);
        }
        if (!feasible)
            continue;
        double value = alpha * agg + (1.0 - alpha) * max(0.0, t - committed);
        if (value < best) {
            best = value;
            best_t = t;
        }
    }
    if (best_time)
        *best_time = best_t;
    return best;
}

double slack_estimate(const Rtpg &graph, SlackMode mode) {
    const Problem &problem = graph.problem();
    bool first = true;
    double acc = 0.0;
    for (const auto &g : problem.goals) {
        double earliest = graph.fact(g.pred).earliest();
        double slack = g.deadline - earliest; // -inf..+inf
        switch (mode) {
        case SlackMode::Min: acc = first ? slack : min(acc, slack); break;
        case SlackMode::Max: acc = first ? slack : max(acc, slack); break;
        case SlackMode::Sum: acc += slack; break;
        }
        first = false;
    }
    return acc;
}

namespace {

struct OpenGoal {
    PredId pred;
    double required;  // delivery anchor: goal pin, or the consumer's start
    int consumer;     // consuming step index, -1 for a top-level goal
    double deadline;  // strict upper bound for top-level goals, +inf otherwise
    bool top;         // top-level goals pick among all options before the
                      // deadline; subgoals only among options by `required`
};

struct OpenGoalOrder {
    bool operator()(const OpenGoal &a, const OpenGoal &b) const {
        if (a.required != b.required)
            return a.required < b.required; // latest first
        if (a.pred != b.pred)
            return a.pred > b.pred;
        return a.consumer > b.consumer;
    }
};

struct Scheduler {
    const Problem *problem;
    double seed_time;
    bool use_mutex;

    // Serializes statically interfering step pairs and returns the resulting
    // schedule end. `orderings_out`, when given, receives the edges.
    double schedule_end(const vector<RelaxedStep> &steps,
                        const vector<RelaxedLink> &links,
                        vector<pair<int, int>> *orderings_out) const {
        size_t n = steps.size();
        vector<pair<int, int>> orderings;
        if (use_mutex && n > 1) {
            vector<char> reach(n * n, 0);
            for (const auto &l : links)
                if (l.from_step >= 0 && l.to_step >= 0)
                    reach[l.from_step * n + l.to_step] = 1;
            auto close = [&]() {
                for (size_t k = 0; k < n; ++k)
                    for (size_t i = 0; i < n; ++i)
                        if (reach[i * n + k])
                            for (size_t j = 0; j < n; ++j)
                                if (reach[k * n + j])
                                    reach[i * n + j] = 1;
            };
            close();
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = i + 1; j < n; ++j) {
                    if (!problem->mutex(steps[i].action_id, steps[j].action_id))
                        continue;
                    if (reach[i * n + j] || reach[j * n + i])
                        continue;
                    size_t from = i, to = j;
                    if (steps[j].start < steps[i].start) {
                        from = j;
                        to = i;
                    }
                    orderings.push_back({(int)from, (int)to});
                    reach[from * n + to] = 1;
                    close();
                }
            }
        }
        // longest-path relaxation from the graph-suggested starts
        vector<double> est(n);
        for (size_t i = 0; i < n; ++i)
            est[i] = steps[i].start;
        for (size_t pass = 0; pass <= n; ++pass) {
            bool changed = false;
            for (const auto &l : links) {
                if (l.from_step < 0 || l.to_step < 0)
                    continue;
                double d = est[l.from_step] + l.offset;
                if (d > est[l.to_step]) {
                    est[l.to_step] = d;
                    changed = true;
                }
            }
            for (const auto &[a, b] : orderings) {
                double d = est[a] + steps[a].duration;
                if (d > est[b]) {
                    est[b] = d;
                    changed = true;
                }
            }
            if (!changed)
                break;
        }
        double end = seed_time;
        for (size_t i = 0; i < n; ++i)
            end = max(end, est[i] + steps[i].duration);
        if (orderings_out)
            *orderings_out = std::move(orderings);
        return end;
    }
};

} // namespace

namespace {

// the time a goal with no deadline is pinned at: the consideration time that
// minimizes the weighted cost/time mix over the goal's own curve
double goal_pin(const Rtpg &graph, const Goal &g, double alpha, double committed) {
    double best = INF, best_t = graph.seed_time();
    for (const auto &bp : graph.fact(g.pred).breakpoints()) {
        if (bp.time >= g.deadline)
            break;
        double v = alpha * bp.cost + (1.0 - alpha) * max(0.0, bp.time - committed);
        if (v < best) {
            best = v;
            best_t = bp.time;
        }
    }
    return best_t;
}

} // namespace

RelaxedPlan extract_relaxed_plan(const Rtpg &graph, const State &state,
                                 const HeuristicOptions &options) {
    const Problem &problem = graph.problem();
    RelaxedPlan rp;
    if (!graph.goals_reachable())
        return rp;

    double committed = state.makespan;
    Scheduler sched{&problem, graph.seed_time(), options.adjust_mutex};

    priority_queue<OpenGoal, vector<OpenGoal>, OpenGoalOrder> open;
    for (const auto &g : problem.goals) {
        double pin = g.deadline < INF
                         ? g.deadline
                         : goal_pin(graph, g, options.alpha, committed);
        open.push({g.pred, pin, -1, g.deadline, true});
    }

    // fact -> (earliest delivery by a committed step, that step)
    unordered_map<PredId, pair<double, int>> achieved;
    double latest_goal_delivery = graph.seed_time();

    long guard = 0;
    while (!open.empty()) {
        if (++guard > 100000)
            return rp; // found = false
        OpenGoal item = open.top();
        open.pop();

        if (state.has_fact(item.pred)) {
            rp.links.push_back({-1, item.consumer, item.pred, 0.0});
            continue;
        }
        auto hit = achieved.find(item.pred);
        if (hit != achieved.end() && hit->second.first <= item.required &&
            hit->second.first < item.deadline) {
            int s = hit->second.second;
            rp.links.push_back(
                {s, item.consumer, item.pred, hit->second.first - rp.steps[s].start});
            if (item.consumer < 0)
                latest_goal_delivery = max(latest_goal_delivery, hit->second.first);
            continue;
        }

        // Candidate achievers: the curve's breakpoints. A top-level goal may
        // use any option before its deadline (it is anchored at its pin); a
        // subgoal needs delivery by its consumer's start.
        const auto &bps = graph.fact(item.pred).breakpoints();
        vector<const CostPoint *> opts;
        for (const auto &bp : bps) {
            if (bp.time >= item.deadline)
                continue;
            if (!item.top && bp.time > item.required)
                continue;
            opts.push_back(&bp);
        }
        if (opts.empty()) {
            // Under a finite lookahead a subgoal's curve may only start after
            // the time we would like it at; fall back to its earliest option.
            if (bps.empty())
                return rp; // found = false
            opts.push_back(&bps.front());
        }

        const CostPoint *chosen = nullptr;
        double chosen_score = INF;
        for (const CostPoint *bp : opts) {
            double t_part = bp->time;
            if (options.adjust_mutex && bp->supporter >= 0) {
                const GroundAction &cand = problem.actions[bp->supporter];
                double dur = graph.action_duration(bp->supporter);
                double off = 0.0;
                for (const auto &e : cand.effects)
                    if (e.add && e.pred == item.pred) {
                        off = e.offset(dur);
                        break;
                    }
                double anchor = max(bp->time, item.required);
                vector<RelaxedStep> tentative = rp.steps;
                tentative.push_back({bp->supporter, anchor - off, dur});
                t_part = max(sched.schedule_end(tentative, rp.links, nullptr),
                             bp->time);
            }
            double score =
                options.alpha * bp->cost +
                (1.0 - options.alpha) * max(0.0, t_part - committed);
            bool better = score < chosen_score;
            if (!better && score == chosen_score && chosen) {
                // deterministic tie-break: init first, then cheaper action,
                // then lexicographic name, then earlier delivery
                auto rank = [&](const CostPoint *p) {
                    if (p->supporter < 0)
                        return make_tuple(0, 0.0, string(), p->time);
                    const GroundAction &a = problem.actions[p->supporter];
                    return make_tuple(1, a.exec_cost, a.signature(), p->time);
                };
                better = rank(bp) < rank(chosen);
            }
            if (better) {
                chosen = bp;
                chosen_score = score;
            }
        }

        if (chosen->supporter < 0) {
            // pending queue event or (after a fallback) the seed itself
            rp.links.push_back({-1, item.consumer, item.pred, 0.0});
            if (item.consumer < 0)
                latest_goal_delivery = max(latest_goal_delivery, chosen->time);
            continue;
        }

        // just-in-time anchoring: deliver at the anchor, never before the
        // option is actually available
        const GroundAction &action = problem.actions[chosen->supporter];
        double duration = graph.action_duration(chosen->supporter);
        double off = 0.0;
        for (const auto &e : action.effects)
            if (e.add && e.pred == item.pred) {
                off = e.offset(duration);
                if (max(chosen->time, item.required) - off >=
                    graph.seed_time() - 1e-9)
                    break;
            }
        double anchor = max(chosen->time, item.required);
        double start = anchor - off;
        int step_idx = static_cast<int>(rp.steps.size());
        rp.steps.push_back({action.id, start, duration});
        rp.total_cost += action.exec_cost;
        for (const auto &e : action.effects) {
            if (!e.add)
                continue;
            double delivery = start + e.offset(duration);
            auto it = achieved.find(e.pred);
            if (it == achieved.end() || delivery < it->second.first)
                achieved[e.pred] = {delivery, step_idx};
        }
        rp.links.push_back({step_idx, item.consumer, item.pred, off});
        if (item.consumer < 0)
            latest_goal_delivery = max(latest_goal_delivery, anchor);

        for (PredId p : action.cond_preds) {
            if (state.has_fact(p)) {
                rp.links.push_back({-1, step_idx, p, 0.0});
                continue;
            }
            auto it = achieved.find(p);
            if (it != achieved.end() && it->second.first <= start) {
                rp.links.push_back({it->second.second, step_idx, p,
                                    it->second.first -
                                        rp.steps[it->second.second].start});
                continue;
            }
            open.push({p, start, step_idx, INF, false});
        }
    }

    rp.end_time = max(sched.schedule_end(rp.steps, rp.links, &rp.orderings),
                      latest_goal_delivery);
    rp.found = true;
    return rp;
}

namespace {

// net constant change an action applies to a resource (0 if none or dynamic)
double net_constant_change(const GroundAction &action, ResId res) {
    double net = 0.0;
    for (const auto &u : action.updates) {
        if (u.res != res || !u.rhs->is_constant())
            continue;
        if (u.op == UpdateOp::Increase)
            net += u.rhs->constant_value();
        else if (u.op == UpdateOp::Decrease)
            net -= u.rhs->constant_value();
    }
    return net;
}

} // namespace

double resource_adjustment(const Rtpg &graph, const State &state,
                           const RelaxedPlan &plan) {
    const Problem &problem = graph.problem();
    double extra = 0.0;
    for (size_t r = 0; r < problem.res_names.size(); ++r) {
        double consumed = 0.0, produced = 0.0;
        for (const auto &s : plan.steps) {
            double net = net_constant_change(problem.actions[s.action_id],
                                             static_cast<ResId>(r));
            if (net > 0.0)
                produced += net;
            else
                consumed -= net;
        }
        double deficit = consumed - (state.resources[r] + produced);
        if (deficit <= 1e-9)
            continue;
        const GroundAction *producer = nullptr;
        double best_net = 0.0;
        for (const auto &a : problem.actions) {
            double net = net_constant_change(a, static_cast<ResId>(r));
            if (net <= 0.0)
                continue;
            bool better = net > best_net;
            if (net == best_net && producer &&
                (a.exec_cost < producer->exec_cost ||
                 (a.exec_cost == producer->exec_cost &&
                  a.signature() < producer->signature())))
                better = true;
            if (better) {
                best_net = net;
                producer = &a;
            }
        }
        if (!producer)
            return INF;
        double count = ceil(deficit / best_net - 1e-9);
        extra += count * producer->exec_cost;
    }
    return extra;
}

HeuristicValue evaluate_heuristic(const Problem &problem, const State &state,
                                  const HeuristicOptions &options) {
    HeuristicValue result;
    if (goals_satisfied(state, problem)) {
        result.h = 0.0;
        result.reachable = true;
        return result;
    }
    double committed = state.makespan;
    Rtpg graph(problem, state,
               {options.lookahead, options.sum_propagation});
    if (!graph.goals_reachable())
        return result; // h = inf, unreachable

    if (!options.use_relaxed_plan) {
        result.h = direct_heuristic(graph, options.alpha, committed);
        result.reachable = isfinite(result.h);
        return result;
    }

    RelaxedPlan rp = extract_relaxed_plan(graph, state, options);
    if (!rp.found) {
        result.h = direct_heuristic(graph, options.alpha, committed);
        result.reachable = isfinite(result.h);
        return result;
    }
    double cost = rp.total_cost;
    if (options.adjust_resource) {
        double adj = resource_adjustment(graph, state, rp);
        if (adj >= INF) {
            result.plan = std::move(rp);
            return result; // h = inf: deficit with no producer
        }
        cost += adj;
    }
    double h_time = max(0.0, rp.end_time - committed);
    result.h = options.alpha * cost + (1.0 - options.alpha) * h_time;
    result.reachable = true;
    result.plan = std::move(rp);
    return result;
}

} // namespace mtplan
