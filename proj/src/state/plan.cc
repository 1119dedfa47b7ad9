#include "state/plan.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

using namespace std;

namespace mtplan {

double Plan::makespan() const {
    double m = 0.0;
    for (const auto &s : steps)
        m = max(m, s.start + s.duration);
    return m;
}

double Plan::exec_cost(const Problem &problem) const {
    double c = 0.0;
    for (const auto &s : steps)
        c += problem.actions[s.action_id].exec_cost;
    return c;
}

double Plan::objective(const Problem &problem, double alpha) const {
    return alpha * exec_cost(problem) + (1.0 - alpha) * makespan();
}

Plan plan_from_state(const State &state) {
    Plan plan;
    for (const PrefixStep *p = state.prefix.get(); p; p = p->parent.get())
        plan.steps.push_back({p->action_id, p->start, p->duration});
    reverse(plan.steps.begin(), plan.steps.end());
    return plan;
}

namespace {

// Names the first violated requirement for the two codes where the culprit
// is a specific condition; other codes are self-describing.
string applicability_detail(const State &s, const GroundAction &action,
                            Applicability code, const Problem &problem) {
    if (code == Applicability::MissingCondition) {
        for (const auto &c : action.conditions)
            if (!s.has_fact(c.pred))
                return ", missing " + problem.pred_names[c.pred];
    } else if (code == Applicability::ResourceCondition) {
        for (const auto &rc : action.res_conditions) {
            double lhs = s.resources[rc.res];
            double rhs;
            try {
                rhs = rc.rhs->evaluate(s.resources);
            } catch (const EvalError &) {
                return ", unevaluable bound on " + problem.res_names[rc.res];
            }
            bool ok = true;
            switch (rc.cmp) {
            case Cmp::Lt: ok = lhs < rhs; break;
            case Cmp::Le: ok = lhs <= rhs; break;
            case Cmp::Gt: ok = lhs > rhs; break;
            case Cmp::Ge: ok = lhs >= rhs; break;
            case Cmp::Eq: ok = lhs == rhs; break;
            }
            if (!ok)
                return ", unsatisfied bound on " + problem.res_names[rc.res];
        }
    }
    return "";
}

string step_text(const Plan &plan, const Problem &problem, size_t i) {
    char buf[64];
    const PlanStep &s = plan.steps[i];
    string name = (s.action_id >= 0 &&
                   s.action_id < static_cast<int>(problem.actions.size()))
                      ? problem.actions[s.action_id].signature()
                      : "(?)";
    snprintf(buf, sizeof(buf), "%.3f", s.start);
    string out = string(buf) + ": " + name;
    snprintf(buf, sizeof(buf), " [%.3f]", s.duration);
    return out + buf;
}
} // namespace

ValidationResult validate_plan(const Plan &plan, const Problem &problem, double tol) {
    ValidationResult r;
    vector<size_t> order(plan.steps.size());
    for (size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return plan.steps[a].start < plan.steps[b].start;
    });

    State s = make_initial_state(problem);
    for (size_t idx : order) {
        const PlanStep &step = plan.steps[idx];
        if (step.action_id < 0 ||
            step.action_id >= static_cast<int>(problem.actions.size())) {
            r.error = "unknown action id in step " + to_string(idx);
            return r;
        }
        if (step.start < s.t - tol) {
            r.error = "step dispatched in the past: " + step_text(plan, problem, idx);
            return r;
        }
        while (!s.queue.empty() && s.queue.front().time <= step.start) {
            try {
                s = advance_time(s, problem);
            } catch (const EvalError &e) {
                r.error = string("event evaluation failed: ") + e.what();
                return r;
            }
        }
        if (s.t < step.start)
            s.t = step.start;
        const GroundAction &action = problem.actions[step.action_id];
        Applicability a = applicability(s, action);
        if (a != Applicability::Ok) {
            r.error = string("step not applicable (") + applicability_name(a) +
                      applicability_detail(s, action, a, problem) +
                      "): " + step_text(plan, problem, idx);
            return r;
        }
        double d = action.eval_duration(s.resources);
        if (fabs(d - step.duration) > tol) {
            r.error = "recorded duration differs from engine duration for step: " +
                      step_text(plan, problem, idx);
            return r;
        }
        try {
            s = apply(s, action, problem);
        } catch (const EvalError &e) {
            r.error = string("effect evaluation failed: ") + e.what();
            return r;
        }
    }
    if (!goals_satisfied(s, problem)) {
        for (const auto &g : problem.goals) {
            if (!goal_satisfied(s, g)) {
                if (g.deadline < INF) {
                    char buf[48];
                    snprintf(buf, sizeof(buf), " (deadline %.3f)", g.deadline);
                    r.error = "goal not achieved before its deadline" +
                              string(buf) + ": " + problem.pred_names[g.pred];
                } else {
                    r.error = "goal not achieved: " + problem.pred_names[g.pred];
                }
                return r;
            }
        }
        r.error = "goals not achieved";
        return r;
    }
    r.ok = true;
    r.makespan = plan.makespan();
    return r;
}

string format_plan(const Plan &plan, const Problem &problem) {
    string out;
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        out += step_text(plan, problem, i);
        out += '\n';
    }
    return out;
}

} // namespace mtplan
