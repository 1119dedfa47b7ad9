#include "search/search.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <unordered_map>

using namespace std;

namespace mtplan {

void evaluate_batch_serial(const Problem &problem, const vector<State> &states,
                           const HeuristicOptions &options,
                           vector<double> &h_out) {
    h_out.resize(states.size());
    for (size_t i = 0; i < states.size(); ++i)
        h_out[i] = evaluate_heuristic(problem, states[i], options).h;
}

void evaluate_batch_parallel(const Problem &problem, const vector<State> &states,
                             const HeuristicOptions &options,
                             vector<double> &h_out) {
    h_out.resize(states.size());
    long n = static_cast<long>(states.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
        h_out[i] = evaluate_heuristic(problem, states[i], options).h;
}

namespace {

struct Node {
    State state;
    double g = 0.0;
    double h = 0.0;
};

struct OpenEntry {
    double f;
    double g;
    long seq;
    size_t node;
};

struct OpenOrder {
    bool operator()(const OpenEntry &a, const OpenEntry &b) const {
        if (a.f != b.f)
            return a.f > b.f; // lower f first
        if (a.g != b.g)
            return a.g < b.g; // then higher g (deeper) first
        return a.seq > b.seq; // then FIFO
    }
};

} // namespace

SearchResult plan(const Problem &problem, const SearchOptions &options) {
    using Clock = chrono::steady_clock;
    const auto t_start = Clock::now();
    const double alpha = options.heuristic.alpha;

    SearchResult result;
    deque<Node> arena;
    priority_queue<OpenEntry, vector<OpenEntry>, OpenOrder> open;
    // content hash -> expanded arena indices, for dominance pruning
    unordered_map<uint64_t, vector<size_t>> expanded;
    long push_seq = 0;

    auto elapsed = [&]() {
        return chrono::duration<double>(Clock::now() - t_start).count();
    };
    auto dominated = [&](const State &s, double g) {
        auto it = expanded.find(s.content_hash());
        if (it == expanded.end())
            return false;
        for (size_t idx : it->second) {
            const Node &n = arena[idx];
            if (n.state.t <= s.t && n.g <= g && n.state.content_equal(s))
                return true;
        }
        return false;
    };

    {
        State init = make_initial_state(problem);
        double g = committed_objective(init, alpha);
        HeuristicValue hv = evaluate_heuristic(problem, init, options.heuristic);
        result.evaluated += 1;
        if (hv.h >= INF) {
            result.elapsed_seconds = elapsed();
            return result; // unsolvable
        }
        arena.push_back({std::move(init), g, hv.h});
        open.push({g + hv.h, g, push_seq++, 0});
        result.generated = 1;
    }

    vector<State> children;
    vector<double> child_h;
    while (!open.empty()) {
        if (options.max_expansions > 0 && result.expanded >= options.max_expansions) {
            result.status = SearchStatus::Limit;
            break;
        }
        if (options.timeout_seconds > 0.0 && elapsed() > options.timeout_seconds) {
            result.status = SearchStatus::Limit;
            break;
        }
        OpenEntry top = open.top();
        open.pop();
        Node &node = arena[top.node];
        if (dominated(node.state, node.g))
            continue;

        if (goals_satisfied(node.state, problem)) {
            result.status = SearchStatus::Solved;
            result.plan = plan_from_state(node.state);
            ValidationResult v = validate_plan(result.plan, problem);
            if (!v.ok)
                throw logic_error("search produced an invalid plan: " + v.error);
            break;
        }

        expanded[node.state.content_hash()].push_back(top.node);
        result.expanded += 1;

        children.clear();
        for (const auto &action : problem.actions)
            if (applicable(node.state, action))
                children.push_back(apply(node.state, action, problem));
        if (!node.state.queue.empty())
            children.push_back(advance_time(node.state, problem));

        if (options.parallel_eval)
            evaluate_batch_parallel(problem, children, options.heuristic, child_h);
        else
            evaluate_batch_serial(problem, children, options.heuristic, child_h);
        result.evaluated += static_cast<long>(children.size());

        for (size_t i = 0; i < children.size(); ++i) {
            if (child_h[i] >= INF)
                continue;
            double g = committed_objective(children[i], alpha);
            if (dominated(children[i], g))
                continue;
            arena.push_back({std::move(children[i]), g, child_h[i]});
            open.push({g + child_h[i], g, push_seq++, arena.size() - 1});
            result.generated += 1;
        }
    }
    result.elapsed_seconds = elapsed();
    return result;
}

} // namespace mtplan
