#include "test_util.hpp"

#include "goalinf/agent/agent.hpp"
#include "goalinf/baselines/birl.hpp"
#include "goalinf/domains/bundle.hpp"
#include "goalinf/pddl/parser.hpp"
#include "goalinf/pddl/semantics.hpp"
#include "goalinf/planner/astar.hpp"

#include <doctest.h>

#include <fstream>
#include <unordered_set>
#include <sstream>

using namespace goalinf;
using namespace goalinf::domains;
using pddl::Problem;
using pddl::State;

namespace {

bool holds_atom(const Problem& pb, const State& s, const std::string& pred, std::vector<std::string> args)
{
    std::vector<pddl::ObjectId> ids;
    for (const auto& a : args)
        ids.push_back(*pb.find_object(a));
    auto sl = pb.atom_slot(*pb.domain().find_predicate(pred), ids);
    return sl->rigid ? pb.rigid_atom(sl->index) : s.test(sl->index);
}

std::vector<std::string> names_of(const Problem& pb, const std::string& type)
{
    std::vector<std::string> out;
    for (auto o : pb.objects_of_type(*pb.domain().find_type(type)))
        out.push_back(pb.object_name(o));
    return out;
}

std::size_t solve_length(const Problem& pb, const State& s, std::size_t goal, planner::HeuristicKind kind)
{
    auto h = planner::make_heuristic(kind, pb);
    auto res = planner::astar(pb, s, pb.goals()[goal], *h, std::nullopt);
    REQUIRE(res.plan.complete);
    return res.plan.steps.size();
}

}  // namespace

TEST_CASE("bundles load with the expected goal counts")
{
    const std::map<std::string, std::size_t> expect{
        {"taxi", 3}, {"doors-keys-gems", 3}, {"block-words", 5}, {"intrusion-detection", 20}};
    CHECK(bundle_names().size() == expect.size());
    for (const auto& [name, goals] : expect) {
        auto b = load_bundle(name);
        CAPTURE(name);
        CHECK(b.goal_count == goals);
        CHECK(!b.problem_files.empty());
        CHECK(b.default_heuristic ==
              (name == "taxi" || name == "doors-keys-gems" ? planner::HeuristicKind::Manhattan
                                                           : planner::HeuristicKind::HAdd));
    }
    CHECK_THROWS_AS(load_bundle("sokoban"), UnknownDomainError);
}

TEST_CASE("taxi has 125 reachable states")
{
    auto b = load_bundle("taxi");
    for (std::size_t i = 0; i < b.problem_files.size(); ++i) {
        auto pb = b.load_problem(i);
        CHECK(baselines::reachable_states(pb, pb.initial_state(), 1000).size() == 125);
    }
}

TEST_CASE("every bundled goal is reachable from init")
{
    for (const auto& name : bundle_names()) {
        auto b = load_bundle(name);
        std::vector<std::filesystem::path> files = b.problem_files;
        files.insert(files.end(), b.scenario_files.begin(), b.scenario_files.end());
        for (const auto& f : files) {
            auto pb = b.load_problem(f);
            for (std::size_t g = 0; g < pb.goals().size(); ++g) {
                CAPTURE(f.string());
                CAPTURE(pb.goals()[g].label);
                CHECK(solve_length(pb, pb.initial_state(), g, b.default_heuristic) > 0);
            }
        }
    }
}

TEST_CASE("bundled problems regenerate byte for byte from their recorded seeds")
{
    for (const auto& name : bundle_names()) {
        auto b = load_bundle(name);
        for (const auto& f : b.problem_files) {
            std::ifstream in(f);
            std::string header;
            std::getline(in, header);
            std::stringstream rest;
            rest << in.rdbuf();
            // "; goalinf generate-problem --domain D --seed S --name N [--passenger P]"
            std::istringstream hs(header);
            std::string tok, domain, pname;
            std::uint64_t seed = 0;
            GenerateParams params;
            while (hs >> tok) {
                if (tok == "--domain")
                    hs >> domain;
                else if (tok == "--seed")
                    hs >> seed;
                else if (tok == "--name")
                    hs >> pname;
                else if (tok == "--passenger")
                    hs >> params.passenger;
            }
            CAPTURE(f.string());
            REQUIRE(domain == name);
            Rng rng(seed);
            CHECK(generate_problem(domain, params, rng, pname) == rest.str());
        }
    }
}

TEST_CASE("generator examples")
{
    Rng rng(7);
    GenerateParams p;
    auto dom = testutil::dkg_domain();
    for (int i = 0; i < 5; ++i) {
        auto pb = pddl::parse_problem(generate_problem("doors-keys-gems", p, rng), dom);
        CHECK(pb.goals().size() == 3);
        CHECK(names_of(pb, "key").size() == 2);
        for (std::size_t g = 0; g < 3; ++g)
            CHECK(solve_length(pb, pb.initial_state(), g, planner::HeuristicKind::Maze) > 0);
    }
    auto bw = load_bundle("block-words");
    auto pb = pddl::parse_problem(generate_problem("block-words", p, rng), bw.domain);
    REQUIRE(pb.goals().size() == 5);
    CHECK(pb.goals()[0].label == "draw");
    for (std::size_t g = 0; g < 5; ++g)
        CHECK(solve_length(pb, pb.initial_state(), g, planner::HeuristicKind::HAdd) > 0);

    GenerateParams tiny;
    tiny.width = tiny.height = 1;
    CHECK_THROWS_AS(generate_problem("doors-keys-gems", tiny, rng), GenerationError);
    GenerateParams bad;
    bad.words = {"noon"};
    CHECK_THROWS_AS(generate_problem("block-words", bad, rng), std::invalid_argument);
    bad = {};
    bad.subset_sizes = {3, 3};
    CHECK_THROWS_AS(generate_problem("intrusion-detection", bad, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_problem("sokoban", p, rng), UnknownDomainError);

    Rng a(3), c(3);
    CHECK(generate_problem("doors-keys-gems", p, a) == generate_problem("doors-keys-gems", p, c));
}

TEST_CASE("state samplers produce valid states")
{
    Rng rng(11);
    SUBCASE("block-words towers are physically consistent")
    {
        auto b = load_bundle("block-words");
        auto pb = b.load_problem(0);
        auto sample = state_sampler("block-words", pb);
        const auto blocks = names_of(pb, "block");
        for (int i = 0; i < 1000; ++i) {
            State s = sample(rng);
            int held = 0;
            for (const auto& x : blocks) {
                int places = holds_atom(pb, s, "ontable", {x}) + holds_atom(pb, s, "holding", {x});
                int above = 0;
                for (const auto& y : blocks) {
                    if (x == y)
                        continue;
                    places += holds_atom(pb, s, "on", {x, y});
                    above += holds_atom(pb, s, "on", {y, x});
                }
                CHECK(places == 1);
                CHECK(above <= 1);
                CHECK(holds_atom(pb, s, "clear", {x}) == (above == 0 && !holds_atom(pb, s, "holding", {x})));
                held += holds_atom(pb, s, "holding", {x});
            }
            CHECK(held <= 1);
            CHECK(holds_atom(pb, s, "handempty", {}) == (held == 0));
        }
    }
    SUBCASE("doors-keys-gems")
    {
        auto b = load_bundle("doors-keys-gems");
        auto pb = b.load_problem(0);
        auto sample = state_sampler("doors-keys-gems", pb);
        const auto xs = pb.fluent_slot(*pb.domain().find_fluent("xpos"), {})->index;
        const auto ys = pb.fluent_slot(*pb.domain().find_fluent("ypos"), {})->index;
        for (int i = 0; i < 1000; ++i) {
            State s = sample(rng);
            const std::string here = "c" + std::to_string(s.fluents[xs]) + "-" + std::to_string(s.fluents[ys]);
            REQUIRE(pb.find_object(here));
            CHECK(!holds_atom(pb, s, "locked", {here}));
            for (const auto& it : names_of(pb, "item"))
                if (holds_atom(pb, s, "has", {it}))
                    CHECK(holds_atom(pb, s, "taken", {it}));
        }
    }
    SUBCASE("intrusion facts respect the attack chain")
    {
        auto b = load_bundle("intrusion-detection");
        auto pb = b.load_problem(0);
        auto sample = state_sampler("intrusion-detection", pb);
        for (int i = 0; i < 1000; ++i) {
            State s = sample(rng);
            for (const auto& h : names_of(pb, "host")) {
                auto on = [&](const char* p) { return holds_atom(pb, s, p, {h}); };
                for (const char* breach : {"root-access", "user-access", "vulnerability-exploited", "information-gathered"})
                    CHECK((!on(breach) || on("recon-performed")));
                CHECK((!on("vandalized") || on("root-access")));
                CHECK((!on("ransomware-deployed") || on("root-access")));
                CHECK((!on("data-stolen") || on("user-access")));
                CHECK((!on("backdoor-installed") || on("vulnerability-exploited")));
                CHECK((!on("service-denied") || on("information-gathered")));
            }
        }
    }
    SUBCASE("taxi")
    {
        auto b = load_bundle("taxi");
        auto pb = b.load_problem(0);
        auto sample = state_sampler("taxi", pb);
        auto reach = baselines::reachable_states(pb, pb.initial_state(), 1000);
        std::unordered_set<State, pddl::StateHash> all(reach.begin(), reach.end());
        for (int i = 0; i < 1000; ++i)
            CHECK(all.count(sample(rng)) == 1);
    }
}

TEST_CASE("bounded agents reach doors-keys-gems goals without large detours")
{
    auto b = load_bundle("doors-keys-gems");
    agent::AgentParams ap;
    ap.heuristic = b.default_heuristic;
    Rng rng(5);
    int ok = 0, runs = 0;
    for (std::size_t i = 0; i < b.problem_files.size(); ++i) {
        auto pb = b.load_problem(i);
        auto h = planner::make_heuristic(ap.heuristic, pb);
        for (std::size_t g = 0; g < pb.goals().size(); ++g) {
            const std::size_t opt = solve_length(pb, pb.initial_state(), g, ap.heuristic);
            for (int rep = 0; rep < 4; ++rep) {
                auto tr = agent::simulate(pb, *h, g, ap, 4 * opt, rng);
                ++runs;
                if (pddl::satisfies(pb, tr.states.back(), pb.goals()[g]) && tr.actions.size() <= 2 * opt)
                    ++ok;
            }
        }
    }
    CAPTURE(ok);
    CAPTURE(runs);
    CHECK(ok >= 0.7 * runs);
}

TEST_CASE("the myopic unlock strands the agent")
{
    auto b = load_bundle("doors-keys-gems");
    auto pb = b.load_problem(b.find("myopic-unlock"));
    std::ifstream in(b.dir / "scenarios" / "myopic-unlock.actions");
    State s = pb.initial_state();
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        auto a = pddl::parse_action(pb, line);
        REQUIRE(pddl::is_applicable(pb, s, a));
        s = pddl::apply(pb, s, a);
        ++n;
    }
    CHECK(n == 10);
    auto h = planner::make_heuristic(planner::HeuristicKind::Maze, pb);
    for (const auto& g : pb.goals()) {
        CHECK(planner::astar(pb, pb.initial_state(), g, *h, std::nullopt).plan.complete);
        CHECK_FALSE(planner::astar(pb, s, g, *h, std::nullopt).plan.complete);
    }
}
