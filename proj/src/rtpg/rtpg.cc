#include "rtpg/rtpg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

using namespace std;

namespace mtplan {

namespace {

Rtpg::Observer &observer_slot() {
    static Rtpg::Observer obs;
    return obs;
}

} // namespace

void Rtpg::set_build_observer(Observer obs) { observer_slot() = std::move(obs); }

Rtpg::Rtpg(const Problem &problem, const State &state, const RtpgOptions &options)
    : problem_(&problem), options_(options) {
    facts_.resize(problem.pred_names.size());
    durations_.assign(problem.actions.size(), -1.0);
    actions_by_condition_.resize(problem.pred_names.size());
    for (const auto &a : problem.actions) {
        try {
            double d = a.eval_duration(state.resources);
            if (d > 0.0 && isfinite(d))
                durations_[a.id] = d;
        } catch (const EvalError &) {
        }
        for (PredId p : a.cond_preds)
            actions_by_condition_[p].push_back(a.id);
    }
    build(state);
}

double Rtpg::action_cost_at(const GroundAction &action, double t) const {
    double agg = 0.0;
    for (PredId p : action.cond_preds) {
        double c = facts_[p].cost_at(t);
        if (c >= INF)
            return INF;
        if (options_.sum_propagation)
            agg += c;
        else
            agg = max(agg, c);
    }
    return agg;
}

void Rtpg::apply_action(int action_id, double t) {
    const GroundAction &action = problem_->actions[action_id];
    double duration = durations_[action_id];
    if (duration < 0.0)
        return;
    double base = action_cost_at(action, t);
    if (base >= INF)
        return;
    double delivered = base + action.exec_cost;
    for (const auto &e : action.effects) {
        if (!e.add)
            continue;
        GraphEvent ev{t + e.offset(duration), next_seq_++, e.pred, delivered,
                      action_id};
        heap_.push_back(ev);
        push_heap(heap_.begin(), heap_.end(), [](const GraphEvent &a, const GraphEvent &b) {
            if (a.time != b.time)
                return a.time > b.time;
            return a.seq > b.seq;
        });
    }
}

bool Rtpg::all_goals_reachable() const {
    for (const auto &g : problem_->goals)
        if (!(facts_[g.pred].earliest() < g.deadline))
            return false;
    return true;
}

double Rtpg::max_goal_deadline() const {
    if (problem_->goals.empty())
        return INF;
    double d = 0.0;
    for (const auto &g : problem_->goals)
        d = max(d, g.deadline);
    return d;
}

void Rtpg::build(const State &state) {
    const auto heap_less = [](const GraphEvent &a, const GraphEvent &b) {
        if (a.time != b.time)
            return a.time > b.time;
        return a.seq > b.seq;
    };
    auto pop_min = [&]() {
        pop_heap(heap_.begin(), heap_.end(), heap_less);
        GraphEvent e = heap_.back();
        heap_.pop_back();
        return e;
    };

    seed_time_ = state.t;
    tau_last_ = seed_time_;
    for (const auto &[p, tj] : state.facts) {
        (void)tj;
        facts_[p].update(seed_time_, 0.0, -1);
    }
    for (const auto &e : state.queue) {
        if (e.kind != EventKind::Add)
            continue;
        heap_.push_back({e.time, next_seq_++, e.pred, 0.0, -1});
        push_heap(heap_.begin(), heap_.end(), heap_less);
    }
    for (const auto &a : problem_->actions)
        if (action_cost_at(a, seed_time_) < INF)
            apply_action(a.id, seed_time_);

    const double horizon = max_goal_deadline();
    const Observer &obs = observer_slot();
    long processed = 0;
    auto process = [&](const GraphEvent &e) {
        if (++processed > 50'000'000)
            throw runtime_error("relaxed graph propagation did not converge");
        if (!facts_[e.pred].update(e.time, e.cost, e.supporter))
            return;
        tau_last_ = max(tau_last_, e.time);
        if (obs)
            obs(e.pred, e.time, e.cost, e.supporter);
        for (int a : actions_by_condition_[e.pred])
            if (action_cost_at(problem_->actions[a], e.time) < INF)
                apply_action(a, e.time);
    };

    // Phase 1: propagate in global time order until every goal is reachable
    // strictly before its deadline. Event times are non-decreasing here, so
    // once the next event is at or past the deadline of a still-unreachable
    // goal the problem is hopeless.
    goals_reachable_ = all_goals_reachable();
    while (!goals_reachable_ && !heap_.empty()) {
        const GraphEvent &top = heap_.front();
        bool hopeless = false;
        for (const auto &g : problem_->goals)
            if (!(facts_[g.pred].earliest() < g.deadline) && top.time >= g.deadline)
                hopeless = true;
        if (hopeless)
            break;
        GraphEvent e = pop_min();
        if (e.time >= horizon)
            continue;
        process(e);
        goals_reachable_ = all_goals_reachable();
    }
    if (!goals_reachable_) {
        tau_first_ = INF;
        heap_.clear();
        return;
    }
    tau_first_ = seed_time_;
    for (const auto &g : problem_->goals)
        tau_first_ = max(tau_first_, facts_[g.pred].earliest());

    // Phase 2: optional extra relaxation controlled by the lookahead.
    if (options_.lookahead == 0) {
        heap_.clear();
        return;
    }
    if (options_.lookahead == LOOKAHEAD_INF) {
        while (!heap_.empty()) {
            GraphEvent e = pop_min();
            if (e.time >= horizon)
                continue;
            process(e);
        }
        return;
    }
    for (long sweep = 0; sweep < options_.lookahead && !heap_.empty(); ++sweep) {
        long boundary = next_seq_;
        vector<GraphEvent> deferred;
        while (!heap_.empty()) {
            GraphEvent e = pop_min();
            if (e.seq >= boundary) {
                deferred.push_back(e);
                continue;
            }
            if (e.time >= horizon)
                continue;
            process(e);
        }
        heap_ = std::move(deferred);
        make_heap(heap_.begin(), heap_.end(), heap_less);
    }
    heap_.clear();
}

string Rtpg::to_csv() const {
    string out = "fact,time,cost,supporter\n";
    char buf[64];
    for (size_t p = 0; p < facts_.size(); ++p) {
        for (const auto &bp : facts_[p].breakpoints()) {
            out += problem_->pred_names[p];
            snprintf(buf, sizeof(buf), ",%.3f,%.3f,", bp.time, bp.cost);
            out += buf;
            out += bp.supporter < 0 ? string("init")
                                    : problem_->actions[bp.supporter].signature();
            out += '\n';
        }
    }
    return out;
}

} // namespace mtplan
