#include "model/problem.h"

#include <algorithm>
#include <cassert>

using namespace std;

namespace mtplan {

string GroundAction::signature() const {
    string s = "(" + name;
    for (const auto &a : args) {
        s += ' ';
        s += a;
    }
    s += ')';
    return s;
}

bool GroundAction::has_add(PredId p) const {
    return binary_search(add_preds.begin(), add_preds.end(), p);
}

bool GroundAction::has_del(PredId p) const {
    return binary_search(del_preds.begin(), del_preds.end(), p);
}

PredId Problem::pred_id(const string &name) const {
    auto it = pred_index.find(name);
    return it == pred_index.end() ? -1 : it->second;
}

const GroundAction *Problem::find_action(const string &signature) const {
    for (const auto &a : actions)
        if (a.signature() == signature)
            return &a;
    return nullptr;
}

static void sort_unique(vector<PredId> &v) {
    sort(v.begin(), v.end());
    v.erase(unique(v.begin(), v.end()), v.end());
}

void finalize_problem(Problem &problem) {
    sort(problem.actions.begin(), problem.actions.end(),
         [](const GroundAction &a, const GroundAction &b) {
             if (a.name != b.name)
                 return a.name < b.name;
             return a.args < b.args;
         });
    for (size_t i = 0; i < problem.actions.size(); ++i) {
        GroundAction &a = problem.actions[i];
        a.id = static_cast<int>(i);
        a.cond_preds.clear();
        a.add_preds.clear();
        a.del_preds.clear();
        for (const auto &c : a.conditions)
            a.cond_preds.push_back(c.pred);
        for (const auto &e : a.effects)
            (e.add ? a.add_preds : a.del_preds).push_back(e.pred);
        sort_unique(a.cond_preds);
        sort_unique(a.add_preds);
        sort_unique(a.del_preds);
    }
    sort(problem.init_facts.begin(), problem.init_facts.end());
    problem.init_facts.erase(
        unique(problem.init_facts.begin(), problem.init_facts.end()),
        problem.init_facts.end());
    if (problem.init_resources.size() < problem.res_names.size())
        problem.init_resources.resize(problem.res_names.size(), 0.0);
    compute_static_mutexes(problem);
}

void compute_static_mutexes(Problem &problem) {
    size_t n = problem.actions.size();
    problem.mutex_table.assign(n * n, 0);
    auto intersects = [](const vector<PredId> &a, const vector<PredId> &b) {
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j])
                return true;
            if (a[i] < b[j])
                ++i;
            else
                ++j;
        }
        return false;
    };
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const GroundAction &a = problem.actions[i];
            const GroundAction &b = problem.actions[j];
            bool m = intersects(a.del_preds, b.cond_preds) ||
                     intersects(a.del_preds, b.add_preds) ||
                     intersects(b.del_preds, a.cond_preds) ||
                     intersects(b.del_preds, a.add_preds);
            problem.mutex_table[i * n + j] = m;
            problem.mutex_table[j * n + i] = m;
        }
    }
}

// Net statically-evaluable change an action applies to a resource: sum of
// constant += amounts minus constant -= amounts. Assignments and non-constant
// amounts contribute nothing (their effect depends on the state).
static double net_increase(const GroundAction &a, ResId r) {
    double net = 0.0;
    for (const auto &u : a.updates) {
        if (u.res != r || !u.rhs->is_constant())
            continue;
        if (u.op == UpdateOp::Increase)
            net += u.rhs->constant_value();
        else if (u.op == UpdateOp::Decrease)
            net -= u.rhs->constant_value();
    }
    return net;
}

void decompile_metric(Problem &problem) {
    if (!problem.has_metric)
        return;
    // Per-action cost: metric-weighted consumption (actions that increase a
    // tracked total "consume" it; net producers contribute nothing).
    vector<double> mean_consumption; // per metric resource term
    mean_consumption.reserve(problem.metric_res_weights.size());
    for (auto &action : problem.actions)
        action.exec_cost = 0.0;
    double weighted_mean_sum = 0.0;
    for (const auto &[res, weight] : problem.metric_res_weights) {
        double total = 0.0;
        for (auto &action : problem.actions) {
            double used = max(net_increase(action, res), 0.0);
            action.exec_cost += weight * used;
            total += used;
        }
        double mean =
            problem.actions.empty() ? 0.0 : total / double(problem.actions.size());
        mean_consumption.push_back(mean);
        weighted_mean_sum += weight * mean;
    }
    if (problem.metric_time_weight <= 0.0 &&
        !problem.metric_res_weights.empty()) {
        problem.metric_alpha = 1.0;
    } else if (weighted_mean_sum <= 0.0) {
        problem.metric_alpha = 0.0;
    } else {
        problem.metric_alpha =
            weighted_mean_sum / (problem.metric_time_weight + weighted_mean_sum);
    }
}

} // namespace mtplan
