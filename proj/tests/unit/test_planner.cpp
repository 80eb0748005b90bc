#include "test_util.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/planner/astar.hpp"
#include "goalinf/planner/heuristic.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

using namespace goalinf;
using namespace goalinf::planner;
using pddl::Problem;
using pddl::State;

namespace {

State replay(const Problem& pb, const State& s0, const PartialPlan& p)
{
    State s = s0;
    for (const auto& st : p.steps) {
        REQUIRE(st.state == s);
        s = pddl::apply(pb, s, st.action);
    }
    return s;
}

// Delete-relaxation fixed point by repeated sweeps over string atoms.
double hadd_oracle(const Problem& pb, const State& s, const pddl::GoalSpec& g)
{
    const auto& d = pb.domain();
    std::map<std::string, double> cost;
    for (const auto& f : pddl::fact_strings(pb, s))
        cost[f] = 0;
    auto c = [&](const std::string& a) { return cost.count(a) ? cost[a] : kInf; };
    struct RA
    {
        std::vector<std::string> pre, add;
    };
    std::vector<RA> acts;
    for (std::uint32_t oi = 0; oi < d.operators.size(); ++oi) {
        const auto& op = d.operators[oi];
        std::vector<pddl::ObjectId> args(op.params.size());
        auto rec = [&](auto&& self, std::size_t k) -> void {
            if (k == args.size()) {
                RA ra;
                for (const auto& l : op.precondition) {
                    if (l.kind == pddl::Literal::Kind::Equality) {
                        if (pddl::holds(pb, l, s, args) == false)
                            return;
                        continue;
                    }
                    if (l.kind == pddl::Literal::Kind::Atom && !l.negated)
                        ra.pre.push_back(pddl::literal_to_string(pb, l, args));
                }
                for (const auto& a : op.add_effects) {
                    pddl::Literal l;
                    l.predicate = a.predicate;
                    l.args = a.args;
                    ra.add.push_back(pddl::literal_to_string(pb, l, args));
                }
                acts.push_back(ra);
                return;
            }
            for (pddl::ObjectId o = 0; o < pb.object_count(); ++o)
                if (d.is_subtype(pb.object_type(o), op.params[k].type)) {
                    args[k] = o;
                    self(self, k + 1);
                }
        };
        rec(rec, 0);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& a : acts) {
            double sum = 1;
            for (const auto& p : a.pre)
                sum += c(p);
            for (const auto& q : a.add)
                if (sum < c(q)) {
                    cost[q] = sum;
                    changed = true;
                }
        }
    }
    double h = 0;
    for (const auto& l : g.literals)
        h += c(pddl::literal_to_string(pb, l, {}));
    return h;
}

}  // namespace

TEST_CASE("manhattan distance to a position goal")
{
    Problem pb = testutil::navigation(testutil::open_grid(5, 5, 1, 1), {{4, 5}});
    auto h = make_heuristic(HeuristicKind::Manhattan, pb);
    CHECK((*h)(pb.initial_state(), pb.goals()[0]) == 7.0);
}

TEST_CASE("manhattan needs position fluents")
{
    Problem pb = testutil::problem(testutil::kBlocksDomain, testutil::kBlocks3Problem);
    CHECK_THROWS_AS(make_heuristic(HeuristicKind::Manhattan, pb), std::invalid_argument);
}

TEST_CASE("goal count of a partially satisfied five-literal goal")
{
    Problem pb = testutil::problem(testutil::kBlocksDomain, R"((define (problem p) (:domain blocks) (:objects a b c d e - block)
        (:init (ontable a) (clear a) (handempty))
        (:goal (and (ontable a) (clear a) (on c d) (on d e) (clear e)))))");
    auto h = make_heuristic(HeuristicKind::GoalCount, pb);
    CHECK((*h)(pb.initial_state(), pb.goals()[0]) == 3.0);
}

TEST_CASE("h_add matches a relaxed fixed-point oracle")
{
    Problem pb = testutil::problem(testutil::kBlocksDomain, testutil::kBlocks3Problem);
    auto h = make_heuristic(HeuristicKind::HAdd, pb);
    for (const auto& g : pb.goals()) {
        const double v = (*h)(pb.initial_state(), g);
        CHECK(v == doctest::Approx(hadd_oracle(pb, pb.initial_state(), g)));
        CHECK(v > 0);
    }
    // Random reachable states of a 4-block problem.
    Problem pb4 = testutil::problem(testutil::kBlocksDomain, R"((define (problem p) (:domain blocks) (:objects a b c d - block)
        (:init (ontable a) (ontable b) (on c a) (on d c) (clear b) (clear d) (handempty))
        (:goals (g1 (and (on a b) (on b c) (on c d))) (g2 (and (holding d) (on b a))))))");
    auto h4 = make_heuristic(HeuristicKind::HAdd, pb4);
    std::mt19937_64 rng(3);
    State s = pb4.initial_state();
    for (int t = 0; t < 60; ++t) {
        for (const auto& g : pb4.goals())
            CHECK((*h4)(s, g) == doctest::Approx(hadd_oracle(pb4, s, g)));
        auto acts = pddl::available_actions(pb4, s);
        s = pddl::apply(pb4, s, acts[std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng)]);
    }
}

TEST_CASE("h_add is infinite for a goal on a false static fact")
{
    Problem pb = testutil::problem(R"((define (domain st) (:predicates (p) (q) (fixed))
        (:action mk :parameters () :precondition (p) :effect (q))))",
                                   "(define (problem x) (:domain st) (:init (p)) (:goals (a (q)) (b (fixed))))");
    auto h = make_heuristic(HeuristicKind::HAdd, pb);
    CHECK((*h)(pb.initial_state(), pb.goals()[0]) == 1.0);
    CHECK((*h)(pb.initial_state(), pb.goals()[1]) == kInf);
}

TEST_CASE("maze distance ignores doors but not walls")
{
    goalinf::domains::GridMap m{{"s#.", ".D.", "..."}};
    Problem pb = testutil::navigation(m, {{3, 1}});
    auto mz = make_heuristic(HeuristicKind::Maze, pb);
    auto mh = make_heuristic(HeuristicKind::Manhattan, pb);
    CHECK((*mh)(pb.initial_state(), pb.goals()[0]) == 2.0);
    CHECK((*mz)(pb.initial_state(), pb.goals()[0]) == 4.0);  // through the door cell
}

TEST_CASE("astar on an open 5x5 grid finds the 7-step path")
{
    auto m = testutil::open_grid(5, 5, 1, 1);
    Problem pb = testutil::navigation(m, {{4, 5}});
    auto h = make_heuristic(HeuristicKind::Manhattan, pb);
    auto r = astar(pb, pb.initial_state(), pb.goals()[0], *h);
    CHECK(r.plan.complete);
    CHECK(r.stats.found_goal);
    CHECK(r.plan.steps.size() == static_cast<std::size_t>(testutil::bfs_distance(m, {1, 1}, {4, 5})));
    CHECK(r.plan.steps.size() == 7);
    CHECK(pddl::satisfies(pb, replay(pb, pb.initial_state(), r.plan), pb.goals()[0]));
}

TEST_CASE("astar: start already at goal, zero budget")
{
    Problem pb = testutil::navigation(testutil::open_grid(5, 5, 2, 2), {{2, 2}, {5, 5}});
    auto h = make_heuristic(HeuristicKind::Manhattan, pb);
    auto r = astar(pb, pb.initial_state(), pb.goals()[0], *h);
    CHECK(r.plan.steps.empty());
    CHECK(r.plan.complete);
    CHECK(r.stats.nodes_expanded <= 1);
    auto z = astar(pb, pb.initial_state(), pb.goals()[1], *h, 0);
    CHECK(z.plan.steps.empty());
    CHECK_FALSE(z.plan.complete);
    CHECK(z.stats.nodes_expanded == 0);
}

TEST_CASE("astar plan lengths equal BFS on random walled grids")
{
    std::mt19937_64 rng(11);
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        auto g = testutil::random_grid(rng);
        Problem pb = testutil::navigation(g.map, {g.goal});
        auto h = make_heuristic(HeuristicKind::Manhattan, pb);
        auto r = astar(pb, pb.initial_state(), pb.goals()[0], *h);
        mismatches += static_cast<int>(r.plan.steps.size()) != g.shortest || !r.plan.complete;
        replay(pb, pb.initial_state(), r.plan);
    }
    CHECK(mismatches == 0);
}

TEST_CASE("unreachable goal exhausts the open list")
{
    goalinf::domains::GridMap m{{"s#."}};
    Problem pb = testutil::navigation(m, {{3, 1}});
    auto h = make_heuristic(HeuristicKind::Manhattan, pb);
    auto r = astar(pb, pb.initial_state(), pb.goals()[0], *h);
    CHECK_FALSE(r.plan.complete);
    CHECK_FALSE(r.stats.found_goal);
    CHECK(r.plan.steps.empty());

    // Same with a budget larger than the reachable space.
    goalinf::Rng rng(1);
    goalinf::domains::GridMap m2{{"s.#."}};
    Problem pb2 = testutil::navigation(m2, {{4, 1}});
    auto h2 = make_heuristic(HeuristicKind::Manhattan, pb2);
    auto r2 = probabilistic_astar(pb2, pb2.initial_state(), pb2.goals()[0], *h2, 0.1, 50, rng);
    CHECK(r2.plan.steps.empty());
    CHECK(r2.stats.nodes_expanded == 2);
}

TEST_CASE("probabilistic astar at vanishing gamma reproduces astar")
{
    std::mt19937_64 gen(5);
    for (int i = 0; i < 40; ++i) {
        auto g = testutil::random_grid(gen);
        Problem pb = testutil::navigation(g.map, {g.goal});
        auto h = make_heuristic(HeuristicKind::Manhattan, pb);
        auto det = astar(pb, pb.initial_state(), pb.goals()[0], *h);
        Rng rng(i);
        auto pr = probabilistic_astar(pb, pb.initial_state(), pb.goals()[0], *h, 1e-9, std::nullopt, rng);
        CHECK(pr.plan == det.plan);
        CHECK(pr.stats.nodes_expanded == det.stats.nodes_expanded);
    }
}

TEST_CASE("equal-f frontier nodes are selected with probability one half")
{
    Problem pb = testutil::navigation(testutil::open_grid(3, 1, 2, 1), {{2, 9}});
    auto h = make_heuristic(HeuristicKind::GoalCount, pb);
    std::map<std::string, int> counts;
    const int n = 2000;
    for (int seed = 0; seed < n; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        auto r = probabilistic_astar(pb, pb.initial_state(), pb.goals()[0], *h, 0.1, 1, rng);
        REQUIRE(r.plan.steps.size() == 1);
        counts[pddl::action_to_string(pb, r.plan.steps[0].action)]++;
    }
    REQUIRE(counts.size() == 2);
    double chi2 = 0;
    for (auto& [k, c] : counts)
        chi2 += (c - n / 2.0) * (c - n / 2.0) / (n / 2.0);
    CHECK(chi2 < 6.635);  // 1 dof, p = 0.01
}

TEST_CASE("probabilistic astar near-optimal on the open 5x5 grid")
{
    Problem pb = testutil::navigation(testutil::open_grid(5, 5, 1, 1), {{4, 5}});
    auto h = make_heuristic(HeuristicKind::Manhattan, pb);
    int optimal = 0;
    for (int seed = 0; seed < 500; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed));
        auto r = probabilistic_astar(pb, pb.initial_state(), pb.goals()[0], *h, 0.1, std::nullopt, rng);
        REQUIRE(r.plan.complete);
        optimal += r.plan.steps.size() == 7;
    }
    // Unit costs and an admissible, consistent heuristic: every f on an
    // optimal path is 7 and any detour costs at least e^(-20) relative weight.
    CHECK(optimal == 500);
}

TEST_CASE("expansions never exceed eta and plans replay")
{
    std::mt19937_64 gen(9);
    for (int i = 0; i < 100; ++i) {
        auto g = testutil::random_grid(gen);
        Problem pb = testutil::navigation(g.map, {g.goal});
        auto h = make_heuristic(HeuristicKind::Manhattan, pb);
        Rng rng(static_cast<std::uint64_t>(i));
        const std::size_t eta = static_cast<std::size_t>(i % 12);
        auto r = probabilistic_astar(pb, pb.initial_state(), pb.goals()[0], *h, 1.0, eta, rng);
        CHECK(r.stats.nodes_expanded <= eta);
        replay(pb, pb.initial_state(), r.plan);
        if (!r.plan.complete)
            CHECK(r.stats.nodes_expanded == eta);
    }
}

TEST_CASE("unbounded probabilistic astar stays within 10x of deterministic node counts")
{
    std::mt19937_64 gen(13);
    for (int i = 0; i < 20; ++i) {
        auto g = testutil::random_grid(gen);
        Problem pb = testutil::navigation(g.map, {g.goal});
        auto h = make_heuristic(HeuristicKind::Manhattan, pb);
        auto det = astar(pb, pb.initial_state(), pb.goals()[0], *h);
        for (int seed = 0; seed < 100; ++seed) {
            Rng rng(static_cast<std::uint64_t>(seed));
            auto r = probabilistic_astar(pb, pb.initial_state(), pb.goals()[0], *h, 0.1, std::nullopt, rng);
            CHECK(r.plan.complete);
            CHECK(r.stats.nodes_expanded <= 10 * std::max<std::size_t>(det.stats.nodes_expanded, 1));
        }
    }
}

TEST_CASE("selection probabilities are shift invariant")
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0, 20), shift(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> f(1 + i % 9);
        for (auto& x : f)
            x = u(gen);
        const double c = shift(gen);
        std::vector<double> g = f;
        for (auto& x : g)
            x += c;
        auto p = selection_probabilities(f, 0.5);
        auto q = selection_probabilities(g, 0.5);
        for (std::size_t k = 0; k < p.size(); ++k)
            CHECK(std::abs(p[k] - q[k]) <= 1e-12);
    }
}
