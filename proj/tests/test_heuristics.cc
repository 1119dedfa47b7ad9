#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "heuristics/heuristics.h"
#include "model/parser.h"

#include <algorithm>
#include <fstream>
#include <string>

using namespace mtplan;

namespace {

std::string data(const char *name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

struct Fixture {
    Problem problem;
    State init;
    Fixture(const char *dom, const char *prob)
        : problem(load_problem_files(data(dom), data(prob))),
          init(make_initial_state(problem)) {}
};

int action_id(const Problem &p, const std::string &sig) {
    const GroundAction *a = p.find_action(sig);
    REQUIRE(a != nullptr);
    return a->id;
}

bool has_step(const Problem &p, const RelaxedPlan &rp, const std::string &sig) {
    int id = action_id(p, sig);
    return std::any_of(rp.steps.begin(), rp.steps.end(),
                       [id](const RelaxedStep &s) { return s.action_id == id; });
}

const RelaxedStep &step_for(const Problem &p, const RelaxedPlan &rp,
                            const std::string &sig) {
    int id = action_id(p, sig);
    auto it = std::find_if(rp.steps.begin(), rp.steps.end(),
                           [id](const RelaxedStep &s) { return s.action_id == id; });
    REQUIRE(it != rp.steps.end());
    return *it;
}

} // namespace

TEST_CASE("committed objective mixes spent cost with the running makespan") {
    Fixture f("travel.dom", "travel.prob");
    CHECK(committed_objective(f.init, 0.5) == 0.0);

    State s = apply(f.init, *f.problem.find_action("(drive-car1 tucson phoenix)"),
                    f.problem);
    // 2.0 spent, busy until t = 1
    CHECK(committed_objective(s, 1.0) == 2.0);
    CHECK(committed_objective(s, 0.0) == 1.0);
    CHECK(committed_objective(s, 0.55) == doctest::Approx(0.55 * 2.0 + 0.45 * 1.0));
}

TEST_CASE("direct estimate slides along the goal curve as the tradeoff shifts") {
    Fixture f("travel.dom", "travel.prob");
    Rtpg g(f.problem, f.init, RtpgOptions{});

    double t = -1.0;
    CHECK(direct_heuristic(g, 0.0, 0.0, &t) == doctest::Approx(2.5));
    CHECK(t == 2.5); // fastest arrival wins when only time matters

    CHECK(direct_heuristic(g, 1.0, 0.0, &t) == doctest::Approx(5.5));
    CHECK(t == 6.0); // cheapest arrival wins when only cost matters

    CHECK(direct_heuristic(g, 0.55, 0.0, &t) == doctest::Approx(5.475));
    CHECK(t == 3.0); // the middle breakpoint beats both extremes

    // makespan already committed past a breakpoint costs no extra time
    CHECK(direct_heuristic(g, 0.0, 3.0, nullptr) == doctest::Approx(0.0));
}

TEST_CASE("direct estimate is infinite when a goal misses its deadline") {
    Fixture f("travel.dom", "travel_deadline.prob");
    Rtpg g(f.problem, f.init, RtpgOptions{});
    // arrivals at 2.5 and 3.0 beat the 5.5 deadline; 6.0 does not
    CHECK(direct_heuristic(g, 1.0, 0.0, nullptr) == doctest::Approx(7.5));

    Fixture u("travel.dom", "travel_unreach.prob");
    Rtpg gu(u.problem, u.init, RtpgOptions{});
    CHECK(direct_heuristic(gu, 0.5, 0.0, nullptr) == INF);
}

TEST_CASE("slack aggregates deadline margins over the goals") {
    std::string dom = slurp(data("travel.dom"));
    Problem p = load_problem_text(
        dom, "(define (problem two-stops) (:domain travel)\n"
             "  (:objects tucson - tucson-area phoenix - phoenix-area\n"
             "            lv - vegas-area la - la-area)\n"
             "  (:init (at tucson))\n"
             "  (:goal (and (at phoenix) (at la)))\n"
             "  (:deadline 5.5 (at phoenix))\n"
             "  (:deadline 3.5 (at la)))");
    Rtpg g(p, make_initial_state(p), RtpgOptions{});
    // earliest arrivals 1.0 and 2.5 leave margins 4.5 and 1.0
    CHECK(slack_estimate(g, SlackMode::Min) == doctest::Approx(1.0));
    CHECK(slack_estimate(g, SlackMode::Max) == doctest::Approx(4.5));
    CHECK(slack_estimate(g, SlackMode::Sum) == doctest::Approx(5.5));
}

TEST_CASE("relaxed plan extraction follows the pinned breakpoint") {
    Fixture f("travel.dom", "travel.prob");
    Rtpg g(f.problem, f.init, RtpgOptions{});
    HeuristicOptions opt;
    opt.alpha = 0.55;

    RelaxedPlan rp = extract_relaxed_plan(g, f.init, opt);
    REQUIRE(rp.found);
    REQUIRE(rp.steps.size() == 2);
    CHECK(rp.total_cost == doctest::Approx(7.5));
    CHECK(rp.end_time == doctest::Approx(3.0));
    CHECK(step_for(f.problem, rp, "(fly phoenix la)").start == doctest::Approx(1.5));
    CHECK(step_for(f.problem, rp, "(drive-car2 tucson phoenix)").start ==
          doctest::Approx(0.0));

    // one link per goal and per step condition, each from a real supplier
    PredId la = f.problem.pred_id("(at la)");
    PredId phx = f.problem.pred_id("(at phoenix)");
    PredId tucson = f.problem.pred_id("(at tucson)");
    REQUIRE(rp.links.size() == 3);
    for (const RelaxedLink &l : rp.links) {
        if (l.pred == la) {
            CHECK(l.to_step == -1);
            CHECK(rp.steps[l.from_step].action_id ==
                  action_id(f.problem, "(fly phoenix la)"));
        } else if (l.pred == phx) {
            CHECK(rp.steps[l.from_step].action_id ==
                  action_id(f.problem, "(drive-car2 tucson phoenix)"));
            CHECK(rp.steps[l.to_step].action_id ==
                  action_id(f.problem, "(fly phoenix la)"));
        } else {
            CHECK(l.pred == tucson);
            CHECK(l.from_step == -1); // initially true
        }
    }

    HeuristicValue v = evaluate_heuristic(f.problem, f.init, opt);
    CHECK(v.reachable);
    CHECK(v.h == doctest::Approx(5.475));
}

TEST_CASE("a tight lookahead forces the expensive early supporters") {
    Fixture f("travel.dom", "travel.prob");
    Rtpg g(f.problem, f.init, RtpgOptions{0, true});
    HeuristicOptions opt;
    opt.alpha = 0.55;
    opt.lookahead = 0;

    RelaxedPlan rp = extract_relaxed_plan(g, f.init, opt);
    REQUIRE(rp.found);
    REQUIRE(rp.steps.size() == 2);
    CHECK(has_step(f.problem, rp, "(fly phoenix la)"));
    CHECK(has_step(f.problem, rp, "(drive-car1 tucson phoenix)"));
    CHECK(rp.total_cost == doctest::Approx(8.0));
    CHECK(rp.end_time == doctest::Approx(2.5));
}

TEST_CASE("a distant deadline pins the goal late and relaxes the route") {
    Fixture f("travel.dom", "travel_deadline7.prob");
    Rtpg g(f.problem, f.init, RtpgOptions{});
    HeuristicOptions opt;
    opt.alpha = 0.55;

    RelaxedPlan rp = extract_relaxed_plan(g, f.init, opt);
    REQUIRE(rp.found);
    REQUIRE(rp.steps.size() == 2);
    CHECK(has_step(f.problem, rp, "(fly phoenix la)"));
    CHECK(has_step(f.problem, rp, "(drive-car2 tucson phoenix)"));
    CHECK(step_for(f.problem, rp, "(fly phoenix la)").start == doctest::Approx(5.5));
    CHECK(rp.end_time == doctest::Approx(7.0));
    CHECK(rp.total_cost == doctest::Approx(7.5));
}

TEST_CASE("the mutex adjustment spreads work across both planes") {
    Fixture f("twoplanes.dom", "twoplanes.prob");
    HeuristicOptions opt;
    opt.alpha = 0.5;

    HeuristicValue plain = evaluate_heuristic(f.problem, f.init, opt);
    REQUIRE(plain.plan.found);
    REQUIRE(plain.plan.steps.size() == 2);
    // unadjusted extraction books the cheap fast plane twice and overlaps it
    CHECK(has_step(f.problem, plain.plan, "(fly1 pkga)"));
    CHECK(has_step(f.problem, plain.plan, "(fly1 pkgb)"));
    CHECK(plain.plan.end_time == doctest::Approx(2.0));
    CHECK(plain.plan.total_cost == doctest::Approx(3.0));
    CHECK(plain.plan.orderings.empty());
    CHECK(plain.h == doctest::Approx(2.5));

    opt.adjust_mutex = true;
    HeuristicValue adj = evaluate_heuristic(f.problem, f.init, opt);
    REQUIRE(adj.plan.found);
    REQUIRE(adj.plan.steps.size() == 2);
    // serializing the interfering pair makes the second plane look better
    bool uses_fly1 = has_step(f.problem, adj.plan, "(fly1 pkga)") ||
                     has_step(f.problem, adj.plan, "(fly1 pkgb)");
    bool uses_fly2 = has_step(f.problem, adj.plan, "(fly2 pkga)") ||
                     has_step(f.problem, adj.plan, "(fly2 pkgb)");
    CHECK(uses_fly1);
    CHECK(uses_fly2);
    CHECK(adj.plan.end_time == doctest::Approx(3.0));
    CHECK(adj.plan.total_cost == doctest::Approx(2.5));
    CHECK(adj.h == doctest::Approx(2.75));
}

TEST_CASE("the resource adjustment charges for uncovered consumption") {
    const char *dom = R"((define (domain depot)
      (:requirements :durative-actions :fluents)
      (:predicates (done) (spent))
      (:functions (stock))
      (:durative-action take13
        :parameters () :duration (= ?duration 1.0) :cost 2.0
        :condition (at start (>= (stock) 13))
        :effect (and (at start (decrease (stock) 13)) (at end (done))))
      (:durative-action take45
        :parameters () :duration (= ?duration 1.0) :cost 2.0
        :condition (at start (>= (stock) 45))
        :effect (and (at start (decrease (stock) 45)) (at end (done))))
      (:durative-action restock
        :parameters () :duration (= ?duration 1.0) :cost 1.0
        :effect (at end (increase (stock) 20))))
    )";

    auto relaxed_plan_of = [](const Problem &p,
                              std::initializer_list<const char *> sigs) {
        RelaxedPlan rp;
        rp.found = true;
        for (const char *sig : sigs) {
            const GroundAction *a = p.find_action(sig);
            REQUIRE(a != nullptr);
            rp.steps.push_back({a->id, 0.0, 1.0});
        }
        return rp;
    };

    Problem low = load_problem_text(dom, "(define (problem d) (:domain depot)\n"
                                         "  (:init (= (stock) 2)) (:goal (done)))");
    State slow = make_initial_state(low);
    Rtpg glow(low, slow, RtpgOptions{});
    // 13 needed, 2 on hand: one 20-unit restock covers the gap
    CHECK(resource_adjustment(glow, slow, relaxed_plan_of(low, {"(take13)"})) ==
          doctest::Approx(1.0));
    // a plan that already restocks owes nothing
    CHECK(resource_adjustment(glow, slow,
                              relaxed_plan_of(low, {"(take13)", "(restock)"})) ==
          doctest::Approx(0.0));

    Problem mid = load_problem_text(dom, "(define (problem d) (:domain depot)\n"
                                         "  (:init (= (stock) 5)) (:goal (done)))");
    State smid = make_initial_state(mid);
    Rtpg gmid(mid, smid, RtpgOptions{});
    // 45 needed, 5 on hand: two restocks
    CHECK(resource_adjustment(gmid, smid, relaxed_plan_of(mid, {"(take45)"})) ==
          doctest::Approx(2.0));

    // without any producer the deficit is hopeless
    std::string barren(dom);
    size_t cut = barren.find("(:durative-action restock");
    REQUIRE(cut != std::string::npos);
    barren = barren.substr(0, cut) + ")";
    Problem dry = load_problem_text(barren,
                                    "(define (problem d) (:domain depot)\n"
                                    "  (:init (= (stock) 2)) (:goal (done)))");
    State sdry = make_initial_state(dry);
    Rtpg gdry(dry, sdry, RtpgOptions{});
    CHECK(resource_adjustment(gdry, sdry, relaxed_plan_of(dry, {"(take13)"})) == INF);
}

TEST_CASE("the resource adjustment surfaces a missing refuel end to end") {
    Fixture f("travel_fuel.dom", "travel_fuel.prob");
    HeuristicOptions opt;
    opt.alpha = 0.5;

    // relaxed reachability ignores the fuel gate, so the raw plan skips refuel
    HeuristicValue plain = evaluate_heuristic(f.problem, f.init, opt);
    REQUIRE(plain.plan.found);
    CHECK(plain.plan.steps.size() == 2);
    CHECK(plain.h == doctest::Approx(5.25));

    opt.adjust_resource = true;
    HeuristicValue adj = evaluate_heuristic(f.problem, f.init, opt);
    // driving wants 10 fuel but only 5 is on hand: one refuel's cost is added
    CHECK(adj.h == doctest::Approx(5.75));
}

TEST_CASE("goal states cost nothing and dead ends cost everything") {
    Fixture f("travel.dom", "travel.prob");
    State s = f.init;
    s = advance_time(apply(s, *f.problem.find_action("(drive-car1 tucson phoenix)"),
                           f.problem),
                     f.problem);
    s = advance_time(apply(s, *f.problem.find_action("(fly phoenix la)"), f.problem),
                     f.problem);
    REQUIRE(goals_satisfied(s, f.problem));

    HeuristicOptions opt;
    HeuristicValue done = evaluate_heuristic(f.problem, s, opt);
    CHECK(done.reachable);
    CHECK(done.h == 0.0);

    Fixture u("travel.dom", "travel_unreach.prob");
    HeuristicValue lost = evaluate_heuristic(u.problem, u.init, opt);
    CHECK_FALSE(lost.reachable);
    CHECK(lost.h == INF);
}
