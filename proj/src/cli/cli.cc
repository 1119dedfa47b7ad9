#include "cli/cli.h"

#include "model/parser.h"
#include "partialize/partialize.h"
#include "search/search.h"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

using namespace std;
using nlohmann::json;

namespace mtplan {

namespace {

string num3(double v) {
    char buf[48];
    snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

double resolve_alpha(const RunConfig &config, const Problem &problem) {
    if (config.alpha >= 0.0)
        return config.alpha;
    if (problem.metric_alpha >= 0.0)
        return problem.metric_alpha;
    return 0.5;
}

string point_text(const OcPlan &oc, int step, double offset) {
    if (step == INIT_NODE)
        return "init";
    if (step == GOAL_NODE)
        return "goal";
    (void)oc;
    return to_string(step) + "+" + num3(offset);
}

void emit_oc_text(ostream &out, const OcPlan &oc, const Problem &problem) {
    out << "; causal links:\n";
    for (const auto &l : oc.links) {
        out << ";   " << point_text(oc, l.from.step, l.from.offset) << " -> "
            << (l.to_step == GOAL_NODE ? string("goal") : to_string(l.to_step))
            << "  " << problem.pred_names[l.pred] << "\n";
    }
    out << "; orderings:\n";
    for (const auto &o : oc.orderings) {
        out << ";   " << point_text(oc, o.from.step, o.from.offset)
            << " <= " << point_text(oc, o.to.step, o.to.offset) << "\n";
    }
    out << "; pc makespan = " << num3(oc.pc_makespan)
        << ", oc makespan = " << num3(oc.oc_makespan) << "\n";
}

json oc_to_json(const OcPlan &oc, const Problem &problem) {
    json links = json::array();
    for (const auto &l : oc.links) {
        json e;
        if (l.from.step == INIT_NODE)
            e["from"] = "init";
        else
            e["from"] = l.from.step;
        e["from_offset"] = l.from.offset;
        if (l.to_step == GOAL_NODE)
            e["to"] = "goal";
        else
            e["to"] = l.to_step;
        e["pred"] = problem.pred_names[l.pred];
        links.push_back(e);
    }
    json orderings = json::array();
    for (const auto &o : oc.orderings) {
        json e;
        e["from"] = o.from.step == INIT_NODE ? json("init") : json(o.from.step);
        e["from_offset"] = o.from.offset;
        e["to"] = o.to.step == INIT_NODE ? json("init") : json(o.to.step);
        e["to_offset"] = o.to.offset;
        orderings.push_back(e);
    }
    json j;
    j["links"] = links;
    j["orderings"] = orderings;
    j["earliest"] = oc.earliest;
    j["oc_makespan"] = oc.oc_makespan;
    return j;
}

} // namespace

int run(const RunConfig &config, ostream &out, ostream &err) {
    Problem problem;
    try {
        problem = load_problem_files(config.domain_path, config.problem_path);
    } catch (const exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (config.format != "plan" && config.format != "json" &&
        config.format != "dot") {
        err << "error: unknown output format '" << config.format << "'\n";
        return 2;
    }

    SearchOptions options;
    options.heuristic.alpha = resolve_alpha(config, problem);
    options.heuristic.lookahead = config.lookahead;
    options.heuristic.sum_propagation = config.sum_propagation;
    options.heuristic.adjust_mutex = config.adjust_mutex;
    options.heuristic.adjust_resource = config.adjust_resource;
    options.timeout_seconds = config.timeout_seconds;
    options.parallel_eval = config.parallel_eval;

    SearchResult result = mtplan::plan(problem, options);
    if (result.status == SearchStatus::Unsolvable) {
        err << "no plan: some goal is unreachable before its deadline\n";
        return 1;
    }
    if (result.status == SearchStatus::Limit) {
        err << "no plan: search stopped at its limit ("
            << num3(result.elapsed_seconds) << "s, " << result.expanded
            << " expansions)\n";
        return 1;
    }

    const Plan &plan = result.plan;
    bool want_oc = config.partialize_plan || config.format == "dot";
    OcPlan oc;
    if (want_oc)
        oc = partialize(plan, problem);

    if (config.format == "dot") {
        out << oc_to_dot(oc, problem);
    } else if (config.format == "json") {
        json j;
        j["config"]["alpha"] = options.heuristic.alpha;
        j["config"]["lookahead"] =
            config.lookahead == LOOKAHEAD_INF
                ? json("inf")
                : json(config.lookahead);
        j["config"]["propagation"] =
            config.sum_propagation ? "sum" : "max";
        j["config"]["adjust_mutex"] = config.adjust_mutex;
        j["config"]["adjust_resource"] = config.adjust_resource;
        j["config"]["partialize"] = config.partialize_plan;
        j["status"] = "solved";
        json steps = json::array();
        for (const auto &s : plan.steps) {
            json e;
            e["start"] = s.start;
            e["action"] = problem.actions[s.action_id].signature();
            e["duration"] = s.duration;
            steps.push_back(e);
        }
        j["steps"] = steps;
        j["cost"] = plan.exec_cost(problem);
        j["makespan"] = plan.makespan();
        j["search"]["expanded"] = result.expanded;
        j["search"]["generated"] = result.generated;
        j["search"]["evaluated"] = result.evaluated;
        if (config.partialize_plan)
            j["partial_order"] = oc_to_json(oc, problem);
        out << j.dump(2) << "\n";
    } else {
        out << format_plan(plan, problem);
        out << "; cost = " << num3(plan.exec_cost(problem))
            << ", makespan = " << num3(plan.makespan()) << "\n";
        if (config.partialize_plan)
            emit_oc_text(out, oc, problem);
    }
    err << "solved: " << plan.steps.size() << " steps, "
        << result.expanded << " expanded, " << result.evaluated
        << " evaluated, " << num3(result.elapsed_seconds) << "s\n";
    return 0;
}

int validate(const string &domain_path, const string &problem_path,
             const string &plan_path, ostream &out, ostream &err) {
    Problem problem;
    try {
        problem = load_problem_files(domain_path, problem_path);
    } catch (const exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    ifstream in(plan_path);
    if (!in) {
        err << "error: cannot read plan file '" << plan_path << "'\n";
        return 2;
    }

    static const regex line_re(
        R"(^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*:\s*(\([^)]*\))\s*\[\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\]\s*$)");

    Plan plan;
    string line;
    int lineno = 0;
    while (getline(in, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == string::npos || line[first] == ';')
            continue;
        smatch m;
        if (!regex_match(line, m, line_re)) {
            err << "error: plan line " << lineno << " is not 't: (action args) [d]'\n";
            return 2;
        }
        const GroundAction *action = problem.find_action(m[2].str());
        if (!action) {
            err << "error: plan line " << lineno << ": unknown action "
                << m[2].str() << "\n";
            return 2;
        }
        plan.steps.push_back({action->id, stod(m[1].str()), stod(m[3].str())});
    }

    // The emitted format rounds to 3 decimals; accept that much duration drift.
    ValidationResult r = validate_plan(plan, problem, 5e-4);
    if (r.ok) {
        out << "valid: " << plan.steps.size() << " steps, makespan "
            << num3(r.makespan) << "\n";
        return 0;
    }
    out << "invalid: " << r.error << "\n";
    return 1;
}

} // namespace mtplan
