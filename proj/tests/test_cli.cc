#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

std::string data(const char *name) {
    return std::string(TEST_DATA_DIR) + "/" + name;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

// Runs the planner binary with stdout/stderr captured in temp files.
RunResult run(const std::string &args) {
    static int counter = 0;
    std::string base = "/tmp/planner_cli_" + std::to_string(getpid()) + "_" +
                       std::to_string(counter++);
    std::string out_path = base + ".out";
    std::string err_path = base + ".err";
    std::string cmd = std::string(PLANNER_BIN) + " " + args + " >" + out_path +
                      " 2>" + err_path;
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string write_temp(const std::string &contents, const char *tag) {
    std::string path = "/tmp/planner_cli_" + std::to_string(getpid()) + "_" +
                       tag + ".txt";
    std::ofstream(path) << contents;
    return path;
}

std::string travel(const char *prob = "travel.prob") {
    return data("travel.dom") + " " + data(prob);
}

} // namespace

TEST_CASE("the default report is byte-stable and self-contained") {
    const std::string expected =
        "0.000: (drive-car1 tucson phoenix) [1.000]\n"
        "1.000: (fly phoenix la) [1.500]\n"
        "; cost = 8.000, makespan = 2.500\n"
        "; causal links:\n"
        ";   init -> 0  (at tucson)\n"
        ";   0+1.000 -> 1  (at phoenix)\n"
        ";   1+1.500 -> goal  (at la)\n"
        "; orderings:\n"
        ";   init <= 0+0.000\n"
        ";   0+1.000 <= 1+0.000\n"
        "; pc makespan = 2.500, oc makespan = 2.500\n";

    RunResult first = run("solve " + travel() + " --alpha 0");
    CHECK(first.exit_code == 0);
    CHECK(first.out == expected);
    // progress and statistics stay out of the machine-readable stream
    CHECK(first.out.find("expanded") == std::string::npos);

    RunResult again = run("solve " + travel() + " --alpha 0");
    RunResult serial = run("solve " + travel() + " --alpha 0 --serial");
    CHECK(again.out == first.out);
    CHECK(serial.out == first.out);
}

TEST_CASE("the tradeoff weight is honored end to end") {
    RunResult cheap = run("solve " + travel() + " --alpha 1");
    CHECK(cheap.exit_code == 0);
    CHECK(cheap.out.find("; cost = 5.500, makespan = 6.000") != std::string::npos);
    CHECK(cheap.out.find("(shuttle lv la)") != std::string::npos);
}

TEST_CASE("conversion can be turned off") {
    RunResult r = run("solve " + travel() + " --alpha 0 --no-partialize");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("; cost = 8.000") != std::string::npos);
    CHECK(r.out.find("causal links") == std::string::npos);
    CHECK(r.out.find("orderings") == std::string::npos);
}

TEST_CASE("json output carries the plan, the conversion and the config") {
    RunResult r = run("solve " + travel() + " --alpha 0 --format json");
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["status"] == "solved");
    CHECK(j["cost"] == 8.0);
    CHECK(j["makespan"] == 2.5);
    REQUIRE(j["steps"].size() == 2);
    CHECK(j["steps"][0]["action"] == "(drive-car1 tucson phoenix)");
    CHECK(j["steps"][1]["start"] == 1.0);
    CHECK(j["partial_order"]["oc_makespan"] == 2.5);
    CHECK(j["partial_order"]["links"].size() == 3);
    CHECK(j["config"]["alpha"] == 0.0);
    CHECK(j["config"]["lookahead"] == "inf");
    CHECK(j["config"]["propagation"] == "sum");
}

TEST_CASE("dot output is a graphviz document") {
    RunResult r = run("solve " + travel() + " --format dot");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("digraph oc {", 0) == 0);
    CHECK(r.out.find("init") != std::string::npos);
}

TEST_CASE("a solved plan round-trips through the validator") {
    RunResult solved = run("solve " + travel() + " --alpha 1");
    REQUIRE(solved.exit_code == 0);
    std::string plan_text;
    for (size_t pos = 0, next = 0; pos < solved.out.size(); pos = next + 1) {
        next = solved.out.find('\n', pos);
        std::string line = solved.out.substr(pos, next - pos);
        if (!line.empty() && line[0] != ';')
            plan_text += line + "\n";
    }
    std::string plan_path = write_temp(plan_text, "roundtrip");

    RunResult v = run("validate " + travel() + " " + plan_path);
    CHECK(v.exit_code == 0);
    CHECK(v.out == "valid: 2 steps, makespan 6.000\n");

    // the same dispatches miss a 5.5 deadline
    RunResult late = run("validate " + travel("travel_deadline.prob") + " " + plan_path);
    CHECK(late.exit_code == 1);
    CHECK(late.out.find("(deadline 5.500)") != std::string::npos);
    std::remove(plan_path.c_str());
}

TEST_CASE("the validator rejects plans that skip a leg") {
    std::string plan_path =
        write_temp("0.000: (fly phoenix la) [1.500]\n", "skipped");
    RunResult r = run("validate " + travel() + " " + plan_path);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("missing (at phoenix)") != std::string::npos);
    std::remove(plan_path.c_str());
}

TEST_CASE("garbage plans and unknown actions are input errors") {
    std::string garbled = write_temp("certainly not a plan line\n", "garbled");
    RunResult r1 = run("validate " + travel() + " " + garbled);
    CHECK(r1.exit_code == 2);
    std::remove(garbled.c_str());

    std::string unknown = write_temp("0.000: (teleport tucson la) [0.100]\n", "unknown");
    RunResult r2 = run("validate " + travel() + " " + unknown);
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("error") != std::string::npos);
    std::remove(unknown.c_str());
}

TEST_CASE("unsolvable problems exit 1 with a reason on stderr") {
    RunResult r = run("solve " + travel("travel_unreach.prob"));
    CHECK(r.exit_code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find("no plan") != std::string::npos);
}

TEST_CASE("hitting a limit is reported as no plan, not as an error") {
    RunResult r = run("solve " + travel() + " --timeout 0.0000001");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("limit") != std::string::npos);
}

TEST_CASE("malformed input names the offending line") {
    std::string broken = write_temp("(define (domain broken)\n  (:predicates (p)\n",
                                    "brokendom");
    RunResult r = run("solve " + broken + " " + data("travel.prob"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error") != std::string::npos);
    std::remove(broken.c_str());

    RunResult missing = run("solve " + data("travel.dom") + " /nonexistent.prob");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("cannot read file") != std::string::npos);
}

TEST_CASE("flag values are validated before any work starts") {
    CHECK(run("solve " + travel() + " --alpha 1.5").exit_code == 2);
    CHECK(run("solve " + travel() + " --lookahead -3").exit_code == 2);
    CHECK(run("solve " + travel() + " --format yaml").exit_code == 2);
    CHECK(run("solve " + travel() + " --prop average").exit_code == 2);
    CHECK(run("solve " + travel() + " --adjust everything").exit_code == 2);
    CHECK(run("solve " + data("travel.dom")).exit_code == 2); // problem missing
    CHECK(run("").exit_code == 2);                            // no subcommand

    RunResult help = run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("solve") != std::string::npos);
    CHECK(help.out.find("validate") != std::string::npos);
}

TEST_CASE("explicit lookahead and propagation choices change the search, not the format") {
    RunResult r = run("solve " + travel() +
                      " --alpha 0 --lookahead 0 --prop max --adjust none");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("; cost = 8.000, makespan = 2.500") != std::string::npos);

    RunResult inf = run("solve " + travel() + " --alpha 0 --lookahead inf");
    CHECK(inf.exit_code == 0);
    CHECK(inf.out.find("makespan = 2.500") != std::string::npos);
}
