#include "test_util.hpp"

#include "goalinf/baselines/birl.hpp"
#include "goalinf/baselines/prp.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <doctest.h>

#include <cmath>

using namespace goalinf;
using namespace goalinf::baselines;
using pddl::Problem;
using pddl::State;

namespace {

std::pair<int, int> position(const Problem& pb, const State& s)
{
    const auto& d = pb.domain();
    auto x = pb.fluent_slot(*d.find_fluent("xpos"), {});
    auto y = pb.fluent_slot(*d.find_fluent("ypos"), {});
    return {static_cast<int>(s.fluents[x->index]), static_cast<int>(s.fluents[y->index])};
}

pddl::GroundAction action_named(const Problem& pb, const State& s, const std::string& text)
{
    auto a = pddl::parse_action(pb, text);
    REQUIRE(pddl::is_applicable(pb, s, a));
    return a;
}

State walk(const Problem& pb, State s, std::initializer_list<std::string> moves)
{
    for (const auto& m : moves) {
        auto acts = pddl::available_actions(pb, s);
        auto it = std::find_if(acts.begin(), acts.end(),
                               [&](const auto& a) { return pddl::action_to_string(pb, a).rfind("(" + m, 0) == 0; });
        REQUIRE(it != acts.end());
        s = pddl::apply(pb, s, *it);
    }
    return s;
}

}  // namespace

TEST_CASE("value iteration on a three-cell corridor matches the closed form")
{
    Problem pb = testutil::navigation(testutil::open_grid(3, 1, 1, 1), {{3, 1}});
    Rng rng(1);
    ViConfig cfg;
    cfg.discount = 0.9;
    cfg.iters = 200;
    auto q = value_iteration(pb, pb.goals()[0], cfg, rng);
    const State s1 = pb.initial_state();
    const State s2 = walk(pb, s1, {"right"});
    const State s3 = walk(pb, s2, {"right"});
    // Entering the goal pays 1 once: Q(2,right)=1, V(1)=0.9, Q(2,left)=0.81.
    CHECK(q.q(s2, action_named(pb, s2, "(right c3-1)")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.q(s2, action_named(pb, s2, "(left c1-1)")) == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(q.value(s1) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(q.value(s3) == 0.0);  // absorbing
    CHECK(q.find(s3) == nullptr);
    CHECK(q.size() == 2);
}

TEST_CASE("sync sweeps contract")
{
    Problem pb = testutil::navigation(testutil::open_grid(5, 5, 1, 1), {{5, 5}});
    Rng rng(1);
    ViConfig cfg;
    cfg.discount = 0.9;
    cfg.iters = 300;
    auto q = value_iteration(pb, pb.goals()[0], cfg, rng);
    const auto& r = q.residuals();
    REQUIRE(r.size() > 5);
    for (std::size_t k = 1; k < r.size(); ++k) {
        CHECK(r[k] <= r[k - 1]);
        CHECK(r[k] <= 0.9 * r[k - 1] + 1e-15);
    }
    CHECK(q.state_updates() == q.iterations() * 24);
    // V(s) = 0.9^(d-1) with d the distance to the goal.
    CHECK(q.value(pb.initial_state()) == doctest::Approx(std::pow(0.9, 7)).epsilon(1e-9));
}

TEST_CASE("value iteration argument checks")
{
    Problem pb = testutil::navigation(testutil::open_grid(3, 1, 1, 1), {{3, 1}});
    Rng rng(1);
    ViConfig cfg;
    cfg.iters = 0;
    CHECK_THROWS_AS(value_iteration(pb, pb.goals()[0], cfg, rng), std::invalid_argument);
    cfg.iters = 10;
    cfg.mode = ViMode::AsyncUniform;
    CHECK_THROWS_AS(value_iteration(pb, pb.goals()[0], cfg, rng), std::invalid_argument);
    cfg.mode = ViMode::AsyncOracle;
    CHECK_THROWS_AS(value_iteration(pb, pb.goals()[0], cfg, rng), std::invalid_argument);
    cfg.mode = ViMode::Sync;
    cfg.state_bound = 2;
    CHECK_THROWS_AS(value_iteration(pb, pb.goals()[0], cfg, rng), std::length_error);
    cfg.state_bound = 3;
    CHECK_NOTHROW(value_iteration(pb, pb.goals()[0], cfg, rng));
}

TEST_CASE("async oracle updates only the sampled states")
{
    Problem pb = testutil::navigation(testutil::open_grid(4, 1, 1, 1), {{4, 1}});
    const State s1 = pb.initial_state();
    const State s3 = walk(pb, s1, {"right", "right"});
    Rng rng(3);
    ViConfig cfg;
    cfg.mode = ViMode::AsyncOracle;
    cfg.iters = 50;
    cfg.oracle_states = {s3};
    auto q = value_iteration(pb, pb.goals()[0], cfg, rng);
    CHECK(q.size() == 1);
    CHECK(q.value(s3) == 1.0);
    CHECK(q.value(s1) == 0.0);
    CHECK(q.state_updates() == 50);
}

TEST_CASE("BIRL posteriors")
{
    Problem pb = testutil::navigation(testutil::open_grid(5, 1, 3, 1), {{1, 1}, {5, 1}});
    std::vector<State> states{pb.initial_state()};
    std::vector<pddl::GroundAction> actions;
    for (int i = 0; i < 2; ++i) {
        auto a = action_named(pb, states.back(), "(left c" + std::to_string(2 - i) + "-1)");
        actions.push_back(a);
        states.push_back(pddl::apply(pb, states.back(), a));
    }
    Rng rng(1);
    ViConfig cfg;
    std::vector<QFunction> qs;
    for (const auto& g : pb.goals())
        qs.push_back(value_iteration(pb, g, cfg, rng));

    SUBCASE("greedy actions raise the matching goal")
    {
        auto post = birl_posteriors(pb, states, actions, qs, 5.0);
        REQUIRE(post.size() == 3);
        CHECK(post[0].probs[0] == doctest::Approx(0.5));
        CHECK(post[1].probs[0] > post[0].probs[0]);
        CHECK(post[2].probs[0] > post[1].probs[0]);
        for (const auto& p : post)
            CHECK(p.probs[0] + p.probs[1] == doctest::Approx(1.0).epsilon(1e-9));
        // Exact product of Boltzmann terms.
        double lg0 = 0, lg1 = 0;
        for (std::size_t k = 0; k < 2; ++k) {
            auto avail = pddl::available_actions(pb, states[k]);
            double z0 = 0, z1 = 0;
            for (const auto& a : avail) {
                z0 += std::exp(5.0 * qs[0].q(states[k], a));
                z1 += std::exp(5.0 * qs[1].q(states[k], a));
            }
            lg0 += 5.0 * qs[0].q(states[k], actions[k]) - std::log(z0);
            lg1 += 5.0 * qs[1].q(states[k], actions[k]) - std::log(z1);
        }
        CHECK(post[2].probs[0] == doctest::Approx(1 / (1 + std::exp(lg1 - lg0))).epsilon(1e-12));
    }
    SUBCASE("alpha = 0 is uninformative")
    {
        for (const auto& p : birl_posteriors(pb, states, actions, qs, 0.0))
            CHECK(p.probs[0] == 0.5);
    }
    SUBCASE("all-zero Q gives the exact uniform posterior")
    {
        ViConfig z;
        z.mode = ViMode::AsyncOracle;
        z.iters = 10;
        z.oracle_states = {walk(pb, pb.initial_state(), {"left", "left"})};  // a goal state: no update
        std::vector<QFunction> zeros;
        for (const auto& g : pb.goals())
            zeros.push_back(value_iteration(pb, g, z, rng));
        CHECK(zeros[0].size() == 0);
        for (const auto& p : birl_posteriors(pb, states, actions, zeros, 1.0))
            CHECK(p.probs[0] == 0.5);
    }
    SUBCASE("shifting a state's Q-values leaves the posterior unchanged")
    {
        auto base = birl_posteriors(pb, states, actions, qs, 1.0);
        auto shifted = qs;
        for (auto& q : shifted) {
            auto e = *q.find(states[1]);
            for (auto& v : e.q)
                v += 3.25;
            q.set(states[1], e);
        }
        auto post = birl_posteriors(pb, states, actions, shifted, 1.0);
        for (std::size_t t = 0; t < post.size(); ++t)
            CHECK(std::abs(post[t].probs[0] - base[t].probs[0]) <= 1e-12);
    }
    SUBCASE("no-ops carry no evidence")
    {
        std::vector<pddl::GroundAction> idle(2, pddl::GroundAction::noop());
        for (const auto& p : birl_posteriors(pb, states, idle, qs, 2.0))
            CHECK(p.probs[0] == 0.5);
    }
}

TEST_CASE("PRP equals brute-force Bayes with shortest-path costs")
{
    std::mt19937_64 rng(2024);
    const double beta = 1.0;
    int checked = 0;
    while (checked < 10) {
        auto rg = testutil::random_grid(rng, 5, 0.2);
        // A second goal anywhere walkable, possibly unreachable.
        std::vector<std::pair<int, int>> cells;
        for (int y = 1; y <= rg.map.height(); ++y)
            for (int x = 1; x <= rg.map.width(); ++x)
                if (rg.map.walkable(x, y) && std::pair{x, y} != rg.goal)
                    cells.push_back({x, y});
        if (cells.empty())
            continue;
        auto other = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
        std::vector<std::pair<int, int>> goals{rg.goal, other};
        Problem pb = testutil::navigation(rg.map, goals);
        auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);

        // Random walk observations.
        std::vector<State> states{pb.initial_state()};
        for (int i = 0; i < 6; ++i) {
            auto acts = pddl::available_actions(pb, states.back());
            if (acts.empty())
                break;
            states.push_back(pddl::apply(pb, states.back(),
                                         acts[std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng)]));
        }
        PrpCache cache(pb, *h);
        auto post = prp_posteriors(pb, states, beta, cache);
        REQUIRE(post.size() == states.size());

        std::vector<double> opt;
        for (const auto& g : goals)
            opt.push_back(testutil::bfs_distance(rg.map, position(pb, states[0]), g));
        for (std::size_t t = 1; t <= states.size(); ++t) {
            std::vector<double> lik;
            double z = 0;
            for (std::size_t g = 0; g < goals.size(); ++g) {
                const int c = testutil::bfs_distance(rg.map, position(pb, states[t - 1]), goals[g]);
                const double l = (c < 0 || opt[g] < 0) ? 0.0 : std::exp(-beta * ((t - 1) + c - opt[g]));
                lik.push_back(l);
                z += l;
            }
            for (std::size_t g = 0; g < goals.size(); ++g) {
                const double expect = z == 0 ? 0.5 : lik[g] / z;
                CHECK(std::abs(post[t - 1].probs[g] - expect) <= 1e-9);
            }
        }
        ++checked;
    }
}

TEST_CASE("PRP detour ratio and unreachable fallback")
{
    // Start at the middle of a 5x5 grid; goals left and right.
    Problem pb = testutil::navigation(testutil::open_grid(5, 5, 3, 3), {{1, 3}, {5, 3}});
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    std::vector<State> states{pb.initial_state()};
    states.push_back(walk(pb, states.back(), {"left"}));
    PrpCache cache(pb, *h);
    const double beta = 1.5;
    auto post = prp_posteriors(pb, states, beta, cache);
    CHECK(post[0].probs[0] == doctest::Approx(0.5));
    // Goal 0: on the optimal path (diff 0). Goal 1: 1 + 3 - 2 = 2 extra steps.
    CHECK(post[1].probs[0] / post[1].probs[1] == doctest::Approx(std::exp(beta * 2)).epsilon(1e-12));

    // Goals sealed off from the start: uniform at every step.
    goalinf::domains::GridMap m;
    m.rows = {"s.#..", "..#..", "..#.."};
    Problem sealed = testutil::navigation(m, {{4, 1}, {5, 3}, {4, 2}});
    auto hs = planner::make_heuristic(planner::HeuristicKind::Manhattan, sealed);
    PrpCache c2(sealed, *hs);
    std::vector<State> ss{sealed.initial_state()};
    ss.push_back(walk(sealed, ss.back(), {"right"}));
    for (const auto& p : prp_posteriors(sealed, ss, 1.0, c2))
        for (double v : p.probs)
            CHECK(v == doctest::Approx(1.0 / 3));
}
