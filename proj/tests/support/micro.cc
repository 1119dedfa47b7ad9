#include "micro.h"

#include "state/state.h"

#include <algorithm>
#include <random>
#include <string>

using namespace std;

namespace mtplan::testsupport {

Problem generate_micro(unsigned seed) {
    mt19937 rng(seed);
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    auto chance = [&](int percent) { return pick(100) < percent; };

    Problem p;
    p.domain_name = "micro";
    p.problem_name = "micro-" + to_string(seed);

    int num_facts = 2 + pick(2); // 2..3
    for (int f = 0; f < num_facts; ++f) {
        string name = "(f" + to_string(f) + ")";
        p.pred_index[name] = f;
        p.pred_names.push_back(name);
    }

    int num_actions = 2 + pick(3); // 2..4
    for (int i = 0; i < num_actions; ++i) {
        GroundAction a;
        a.name = "a" + to_string(i);
        double dur = 1 + pick(3);
        a.duration = Expr::constant(dur);
        a.duration_const = dur;
        a.exec_cost = 1 + pick(3);
        for (PredId f = 0; f < num_facts; ++f) {
            if (chance(35)) {
                Condition c;
                c.pred = f;
                c.when = chance(70) ? CondTime::AtStart : CondTime::OverAll;
                a.conditions.push_back(c);
            }
            if (chance(30)) {
                Effect e;
                e.pred = f;
                e.add = true;
                e.when = chance(50) ? EffTime::AtStart : EffTime::AtEnd;
                a.effects.push_back(e);
            } else if (chance(15)) {
                Effect e;
                e.pred = f;
                e.add = false;
                e.when = chance(50) ? EffTime::AtStart : EffTime::AtEnd;
                a.effects.push_back(e);
            }
        }
        if (a.effects.empty()) {
            Effect e;
            e.pred = pick(num_facts);
            e.add = true;
            e.when = EffTime::AtEnd;
            a.effects.push_back(e);
        }
        p.actions.push_back(std::move(a));
    }

    for (PredId f = 0; f < num_facts; ++f)
        if (chance(40))
            p.init_facts.push_back(f);

    int num_goals = 1 + pick(min(2, num_facts));
    vector<PredId> order(num_facts);
    for (PredId f = 0; f < num_facts; ++f)
        order[f] = f;
    shuffle(order.begin(), order.end(), rng);
    for (int g = 0; g < num_goals; ++g) {
        Goal goal;
        goal.pred = order[g];
        if (chance(35))
            goal.deadline = 2 + pick(5); // 2..6
        p.goals.push_back(goal);
    }

    finalize_problem(p);
    return p;
}

namespace {

struct Enumerator {
    const Problem &problem;
    double alpha;
    int max_steps;
    long nodes_cap;
    long nodes = 0;
    bool capped = false;
    double best = INF;
    Plan best_plan;

    void dfs(const State &s, double cost, double max_end) {
        if (nodes >= nodes_cap) {
            capped = true;
            return;
        }
        ++nodes;
        double lb = alpha * cost + (1.0 - alpha) * max_end;
        if (lb >= best)
            return;
        if (goals_satisfied(s, problem)) {
            best = lb;
            best_plan = plan_from_state(s);
            return; // adding steps can only grow cost and makespan
        }
        if (s.steps < max_steps) {
            for (const auto &a : problem.actions) {
                if (applicability(s, a) != Applicability::Ok)
                    continue;
                double dur = a.eval_duration(s.resources);
                dfs(apply(s, a, problem), cost + a.exec_cost,
                    max(max_end, s.t + dur));
            }
        }
        if (!s.queue.empty())
            dfs(advance_time(s, problem), cost, max_end);
    }
};

} // namespace

double enumerate_best(const Problem &problem, double alpha, int max_steps,
                      Plan *best_plan, long nodes_cap, bool *capped) {
    Enumerator e{problem, alpha, max_steps, nodes_cap};
    e.dfs(make_initial_state(problem), 0.0, 0.0);
    if (best_plan)
        *best_plan = e.best_plan;
    if (capped)
        *capped = e.capped;
    return e.best;
}

} // namespace mtplan::testsupport
