#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "model/parser.h"
#include "search/search.h"
#include "support/logistics_gen.h"
#include "support/micro.h"

#include <algorithm>
#include <string>
#include <vector>

using namespace mtplan;
using namespace mtplan::testsupport;

namespace {

std::string data(const char *name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

Problem load(const char *dom, const char *prob) {
    return load_problem_files(data(dom), data(prob));
}

// The direct estimate under max propagation never overshoots the true
// remaining objective, so plans found with it are optimal.
SearchOptions admissible(double alpha) {
    SearchOptions opt;
    opt.heuristic.alpha = alpha;
    opt.heuristic.sum_propagation = false;
    opt.heuristic.use_relaxed_plan = false;
    return opt;
}

std::vector<std::string> names(const Plan &plan, const Problem &p) {
    std::vector<std::string> out;
    for (const PlanStep &s : plan.steps)
        out.push_back(p.actions[s.action_id].signature());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("the tradeoff weight steers between the fast and the cheap route") {
    Problem p = load("travel.dom", "travel.prob");

    SearchResult fast = plan(p, admissible(0.0));
    REQUIRE(fast.status == SearchStatus::Solved);
    CHECK(fast.plan.makespan() == doctest::Approx(2.5));
    CHECK(fast.plan.exec_cost(p) == doctest::Approx(8.0));
    CHECK(names(fast.plan, p) ==
          std::vector<std::string>{"(drive-car1 tucson phoenix)", "(fly phoenix la)"});

    SearchResult cheap = plan(p, admissible(1.0));
    REQUIRE(cheap.status == SearchStatus::Solved);
    CHECK(cheap.plan.exec_cost(p) == doctest::Approx(5.5));
    CHECK(cheap.plan.makespan() == doctest::Approx(6.0));
    CHECK(names(cheap.plan, p) ==
          std::vector<std::string>{"(drive-car1-vegas tucson lv)", "(shuttle lv la)"});

    SearchResult mixed = plan(p, admissible(0.5));
    REQUIRE(mixed.status == SearchStatus::Solved);
    CHECK(mixed.plan.objective(p, 0.5) == doctest::Approx(5.25));

    for (const SearchResult *r : {&fast, &cheap, &mixed}) {
        CHECK(validate_plan(r->plan, p).ok);
        CHECK(r->expanded > 0);
        CHECK(r->generated >= r->expanded);
        CHECK(r->evaluated > 0);
    }
}

TEST_CASE("deadlines reroute the plan even when they cost more") {
    Problem p = load("travel.dom", "travel_deadline.prob");

    // the cheap 6.0 arrival misses the 5.5 deadline
    SearchResult cheap = plan(p, admissible(1.0));
    REQUIRE(cheap.status == SearchStatus::Solved);
    CHECK(cheap.plan.exec_cost(p) == doctest::Approx(7.5));
    CHECK(validate_plan(cheap.plan, p).ok);

    SearchResult fast = plan(p, admissible(0.0));
    REQUIRE(fast.status == SearchStatus::Solved);
    CHECK(fast.plan.makespan() == doctest::Approx(2.5));

    // a 7.0 deadline readmits the shuttle
    Problem relaxed = load("travel.dom", "travel_deadline7.prob");
    SearchResult again = plan(relaxed, admissible(1.0));
    REQUIRE(again.status == SearchStatus::Solved);
    CHECK(again.plan.exec_cost(relaxed) == doctest::Approx(5.5));
}

TEST_CASE("an unreachable goal is reported before any expansion") {
    Problem p = load("travel.dom", "travel_unreach.prob");
    SearchResult r = plan(p, admissible(0.5));
    CHECK(r.status == SearchStatus::Unsolvable);
    CHECK(r.expanded == 0);
    CHECK(r.evaluated == 1); // only the initial state was ever looked at
    CHECK(r.plan.steps.empty());
}

TEST_CASE("expansion and time limits stop the search cleanly") {
    GeneratedInstance inst = generate_logistics(LogisticsSpec{2, 2, 1, 7});
    Problem p = load_problem_text(inst.domain, inst.problem);

    SearchOptions capped = admissible(0.5);
    capped.max_expansions = 1;
    SearchResult r = plan(p, capped);
    CHECK(r.status == SearchStatus::Limit);
    CHECK(r.expanded <= 1);

    SearchOptions timed = admissible(0.5);
    timed.timeout_seconds = 1e-9;
    SearchResult t = plan(p, timed);
    CHECK(t.status == SearchStatus::Limit);
}

TEST_CASE("serial and parallel batch evaluation agree bit for bit") {
    Problem p = load("twoplanes.dom", "twoplanes.prob");

    // collect a frontier by breadth-first expansion of the first two levels
    std::vector<State> states{make_initial_state(p)};
    for (int depth = 0; depth < 2; ++depth) {
        std::vector<State> next;
        for (const State &s : states) {
            for (const GroundAction &a : p.actions)
                if (applicable(s, a))
                    next.push_back(apply(s, a, p));
            if (!s.queue.empty())
                next.push_back(advance_time(s, p));
        }
        states.insert(states.end(), next.begin(), next.end());
    }
    REQUIRE(states.size() > 10);

    HeuristicOptions opt;
    opt.alpha = 0.5;
    opt.adjust_mutex = true;
    opt.adjust_resource = true;
    std::vector<double> serial, parallel;
    evaluate_batch_serial(p, states, opt, serial);
    evaluate_batch_parallel(p, states, opt, parallel);
    REQUIRE(serial.size() == states.size());
    REQUIRE(parallel.size() == states.size());
    for (size_t i = 0; i < states.size(); ++i) {
        CAPTURE(i);
        CHECK(serial[i] == parallel[i]); // exact, not approximate
    }
}

TEST_CASE("both plane assignments fall out of the mutex-aware search") {
    Problem p = load("twoplanes.dom", "twoplanes.prob");
    SearchOptions opt;
    opt.heuristic.alpha = 0.5;
    opt.heuristic.adjust_mutex = true;
    SearchResult r = plan(p, opt);
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(r.plan.steps.size() == 2);
    CHECK(r.plan.exec_cost(p) == doctest::Approx(2.5));
    CHECK(r.plan.makespan() == doctest::Approx(3.0));
    CHECK(validate_plan(r.plan, p).ok);
}

TEST_CASE("found plans are never worse than the enumerated optimum") {
    // exhaustive comparison over a band of tiny random instances
    for (unsigned seed = 1; seed <= 40; ++seed) {
        Problem p = generate_micro(seed);
        for (double alpha : {0.0, 0.5, 1.0}) {
            CAPTURE(seed);
            CAPTURE(alpha);

            bool capped = false;
            double best = enumerate_best(p, alpha, 6, nullptr, 2000000, &capped);
            REQUIRE_FALSE(capped);

            HeuristicValue root = evaluate_heuristic(
                p, make_initial_state(p), admissible(alpha).heuristic);
            if (root.h != INF)
                CHECK(root.h <= best + 1e-9); // the estimate never overshoots

            SearchResult r = plan(p, admissible(alpha));
            if (best == INF) {
                CHECK(r.status == SearchStatus::Unsolvable);
            } else {
                REQUIRE(r.status == SearchStatus::Solved);
                CHECK(validate_plan(r.plan, p).ok);
                if (r.plan.steps.size() <= 6)
                    CHECK(r.plan.objective(p, alpha) <= best + 1e-9);
            }
        }
    }
}

TEST_CASE("a generated delivery instance solves with the default pipeline") {
    GeneratedInstance inst = generate_logistics(LogisticsSpec{2, 1, 1, 3});
    Problem p = load_problem_text(inst.domain, inst.problem);

    SearchOptions opt; // relaxed plan, sum propagation, parallel evaluation
    opt.heuristic.alpha = 0.5;
    opt.heuristic.adjust_resource = true;
    SearchResult r = plan(p, opt);
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(validate_plan(r.plan, p).ok);
    CHECK(r.plan.steps.size() >= 3); // load, move, unload at least
    CHECK(r.expanded > 0);
    CHECK(r.elapsed_seconds >= 0.0);
}
