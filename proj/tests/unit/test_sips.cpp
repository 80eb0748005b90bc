#include "test_util.hpp"

#include "posterior_oracle.hpp"

#include "goalinf/sips/sips.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace goalinf;
using namespace goalinf::sips;
using observation::NoiseModel;
using observation::Observation;
using pddl::Problem;

namespace {

Problem toy()
{
    return testutil::navigation(testutil::open_grid(4, 3, 1, 2), {{4, 1}, {4, 3}});
}

std::vector<Observation> noisy_run(const Problem& pb, const planner::Heuristic& h, std::size_t goal,
                                   const agent::AgentParams& ap, const NoiseModel& nm, std::size_t horizon,
                                   std::uint64_t seed)
{
    Rng rng(seed);
    auto tr = agent::simulate(pb, h, goal, ap, horizon - 1, rng);
    while (tr.states.size() < horizon)
        tr.states.push_back(tr.states.back());
    std::vector<Observation> obs;
    for (const auto& s : tr.states)
        obs.push_back(observation::corrupt(pb, s, nm, rng));
    return obs;
}

}  // namespace

TEST_CASE("ess of known weight vectors")
{
    std::vector<double> a{std::log(2.0), 0.0, 0.0};
    CHECK(ess(a) == doctest::Approx(16.0 / 6.0));
    std::vector<double> b(7, -3.5);
    CHECK(ess(b) == doctest::Approx(7.0));
    std::vector<double> c{-kInf, 1.0, -kInf};
    CHECK(ess(c) == doctest::Approx(1.0));
    std::vector<double> d{-kInf, -kInf};
    CHECK(ess(d) == 0.0);
}

TEST_CASE("systematic resampling hits floor/ceil of expected counts")
{
    std::vector<double> lw{std::log(0.7), std::log(0.2), std::log(0.1)};
    Rng rng(5);
    std::vector<double> mean(3, 0.0);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        auto idx = systematic_indices(lw, 10, rng);
        REQUIRE(idx.size() == 10);
        std::vector<int> c(3, 0);
        for (auto i : idx)
            c.at(i)++;
        CHECK(std::abs(c[0] - 7) <= 1);
        CHECK(std::abs(c[1] - 2) <= 1);
        CHECK(std::abs(c[2] - 1) <= 1);
        for (int j = 0; j < 3; ++j)
            mean[j] += c[j];
    }
    // Unbiased: E[count_i] = k w_i.
    CHECK(mean[0] / reps == doctest::Approx(7.0).epsilon(0.01));
    CHECK(mean[1] / reps == doctest::Approx(2.0).epsilon(0.02));
    CHECK(mean[2] / reps == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("systematic resampling never picks a dead particle")
{
    Rng rng(9);
    for (int r = 0; r < 2000; ++r) {
        std::vector<double> lw{-kInf, std::log(1e-300), -kInf, 0.0, -kInf};
        for (auto i : systematic_indices(lw, 13, rng))
            CHECK((i == 1 || i == 3));
    }
    std::vector<double> dead{-kInf, -kInf};
    CHECK_THROWS_AS(systematic_indices(dead, 3, rng), AllParticlesDeadError);
}

TEST_CASE("replan time proposal")
{
    auto u = replan_time_proposal(4, 0);
    for (double p : u)
        CHECK(p == doctest::Approx(0.25));
    auto q = replan_time_proposal(5, 3);
    const double z = 1 + 2 * std::exp(-0.5) + 2 * std::exp(-1.0);
    CHECK(q[2] == doctest::Approx(1 / z));
    CHECK(q[0] == doctest::Approx(std::exp(-1.0) / z));
    CHECK(q[4] == doctest::Approx(std::exp(-1.0) / z));
    CHECK(std::accumulate(q.begin(), q.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("init stratifies particles over goals")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 4;
    SipsContext ctx{pb, *h, cfg};
    Rng rng(1);
    auto ps = init(ctx, rng);
    REQUIRE(ps.particles.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(ps.particles[i].goal == i / 4);
        CHECK(ps.particles[i].states.size() == 1);
        CHECK(ps.particles[i].log_weight == 0.0);
    }
    auto snap = goal_posterior(ps, 2);
    CHECK(snap.probs[0] == doctest::Approx(0.5));
    CHECK(snap.ess == doctest::Approx(8.0));
}

TEST_CASE("posteriors are normalized and runs are reproducible")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 20;
    cfg.noise = {0.05, 0.5};
    cfg.rejuvenation.enabled = true;
    auto obs = noisy_run(pb, *h, 1, cfg.agent, cfg.noise, 4, 3);
    SipsContext ctx{pb, *h, cfg};
    Rng r1(77), r2(77);
    auto a = run(ctx, obs, r1);
    auto b = run(ctx, obs, r2);
    REQUIRE(a.size() == 4);
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].t == t + 1);
        CHECK(std::accumulate(a[t].probs.begin(), a[t].probs.end(), 0.0) == doctest::Approx(1.0));
        CHECK(a[t].probs == b[t].probs);
        CHECK(a[t].nodes_expanded == b[t].nodes_expanded);
        if (t > 0)
            CHECK(a[t].nodes_expanded >= a[t - 1].nodes_expanded);
    }
}

TEST_CASE("stepping incrementally equals a batch run")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 15;
    cfg.noise = {0.05, 0.5};
    auto obs = noisy_run(pb, *h, 0, cfg.agent, cfg.noise, 5, 11);
    SipsContext ctx{pb, *h, cfg};
    Rng r1(4), r2(4);
    auto batch = run(ctx, obs, r1);
    auto ps = init(ctx, r2);
    for (std::size_t t = 0; t < obs.size(); ++t) {
        step(ps, obs[t], ctx, r2);
        auto snap = goal_posterior(ps, 2);
        CHECK(snap.probs == batch[t].probs);
        CHECK(snap.ess == batch[t].ess);
        for (const auto& p : ps.particles) {
            CHECK(p.states.size() == t + 1);
            CHECK(p.loglik.size() == t + 1);
            CHECK(p.plans.size() == t);
        }
    }
}

TEST_CASE("particles that keep predicting the observations never replan")
{
    Problem pb = testutil::navigation(testutil::open_grid(6, 1, 1, 1), {{6, 1}, {1, 1}});
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 5;
    cfg.noise = NoiseModel{0, 0};
    cfg.agent.unlimited_budget = true;
    Rng sim(2);
    auto tr = agent::simulate(pb, *h, 0, cfg.agent, 10, sim);
    std::vector<Observation> obs;
    for (const auto& s : tr.states)
        obs.push_back(observation::observe_exact(pb, s));
    SipsContext ctx{pb, *h, cfg};
    Rng rng(3);
    auto snaps = run(ctx, obs, rng);
    // Goal-1 particles sit on their goal at t = 1 and idle without search;
    // goal-0 particles plan once at t = 1 and follow that plan to the end.
    CHECK(snaps.back().planner_calls == 5);
    CHECK(snaps.back().probs[0] == doctest::Approx(1.0));
}

TEST_CASE("inconsistent observations kill every particle")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 3;
    cfg.noise = NoiseModel{0, 0};
    SipsContext ctx{pb, *h, cfg};
    Rng rng(1);
    auto ps = init(ctx, rng);
    auto o = observation::observe_exact(pb, pb.initial_state());
    o.fluents[0] += 2;
    CHECK_THROWS_AS(step(ps, o, ctx, rng), AllParticlesDeadError);
}

TEST_CASE("first divergence finds the earliest disagreeing state")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    agent::AgentParams ap;
    Rng rng(8);
    auto tr = agent::simulate(pb, *h, 0, ap, 3, rng);
    Particle p;
    p.states = tr.states;
    std::vector<Observation> obs;
    for (const auto& s : tr.states)
        obs.push_back(observation::observe_exact(pb, s));
    NoiseModel nm{0.05, 0.25};
    CHECK(first_divergence(p, obs, nm) == 0);
    obs[2].fluents[0] += 0.4;  // within 2 sigma
    CHECK(first_divergence(p, obs, nm) == 0);
    obs[2].fluents[0] += 0.2;
    CHECK(first_divergence(p, obs, nm) == 3);
    obs[1].bits[0] ^= 1;
    CHECK(first_divergence(p, obs, nm) == 2);
}

TEST_CASE("SIPS matches the brute-force posterior on a two-goal toy")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 1000;
    cfg.noise = {0.05, 0.75};
    const std::size_t horizon = 4;
    auto tab = testutil::tabulate(pb, *h, cfg.agent, horizon, 100000, 12345);

    for (bool rejuv : {false, true}) {
        cfg.rejuvenation.enabled = rejuv;
        SipsContext ctx{pb, *h, cfg};
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            auto obs = noisy_run(pb, *h, seed % 2, cfg.agent, cfg.noise, horizon, 100 + seed);
            Rng rng(seed);
            auto snaps = run(ctx, obs, rng);
            for (std::size_t t = 1; t <= horizon; ++t) {
                auto exact = testutil::exact_posterior(tab, std::span(obs).first(t), cfg.noise);
                CAPTURE(rejuv);
                CAPTURE(seed);
                CAPTURE(t);
                CHECK(testutil::total_variation(exact, snaps[t - 1].probs) <= 0.05);
            }
        }
    }
}

TEST_CASE("rejuvenation moves leave the target distribution invariant")
{
    // A particle drawn from the exact posterior must stay distributed like it
    // after one MH move: compare goal frequencies before and after.
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 1500;
    cfg.noise = {0.05, 0.75};
    cfg.ess_threshold = 2.0;  // resample (and rejuvenate) at every step
    cfg.rejuvenation.enabled = true;
    cfg.rejuvenation.goal_move_prob = 0.5;
    auto tab = testutil::tabulate(pb, *h, cfg.agent, 4, 100000, 999);
    auto obs = noisy_run(pb, *h, 0, cfg.agent, cfg.noise, 4, 31);
    SipsContext ctx{pb, *h, cfg};
    Rng rng(6);
    auto snaps = run(ctx, obs, rng);
    auto exact = testutil::exact_posterior(tab, obs, cfg.noise);
    CHECK(testutil::total_variation(exact, snaps.back().probs) <= 0.05);
}

TEST_CASE("config validation")
{
    SipsConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.particles_per_goal = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.rejuvenation.temperature = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.ess_threshold = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("MH chain of rejuvenation moves has the posterior as its stationary law")
{
    Problem pb = toy();
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.noise = {0.05, 0.75};
    cfg.rejuvenation.enabled = true;
    cfg.rejuvenation.goal_move_prob = 0.5;
    const std::size_t horizon = 3;
    auto obs = noisy_run(pb, *h, 0, cfg.agent, cfg.noise, horizon, 57);
    auto tab = testutil::tabulate(pb, *h, cfg.agent, horizon, 100000, 58);
    auto exact = testutil::exact_posterior(tab, obs, cfg.noise);

    SipsContext ctx{pb, *h, cfg};
    Particle p;
    p.goal = 1;
    p.rng = Rng(59);
    p.states.push_back(pb.initial_state());
    p.loglik.push_back(observation::log_likelihood(obs[0], p.states[0], cfg.noise));
    while (p.length() < horizon) {
        extend(p, ctx);
        p.loglik.push_back(observation::log_likelihood(obs[p.length() - 1], p.states.back(), cfg.noise));
    }
    const int iters = 50000, burn = 1000;
    std::vector<double> freq(2, 0.0);
    for (int i = 0; i < iters + burn; ++i) {
        rejuvenate(p, obs, ctx);
        REQUIRE(p.length() == horizon);
        if (i >= burn)
            freq[p.goal] += 1.0 / iters;
    }
    CAPTURE(exact[0]);
    CHECK(std::abs(freq[0] - exact[0]) <= 0.02);
}

TEST_CASE("noise-free observations pin the goal once plans diverge")
{
    // Corridor start in the middle: the first move reveals the goal.
    Problem pb = testutil::navigation(testutil::open_grid(5, 1, 3, 1), {{1, 1}, {5, 1}});
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.particles_per_goal = 10;
    cfg.noise = NoiseModel{0, 0};
    Rng sim(1);
    auto tr = agent::simulate(pb, *h, 1, cfg.agent, 5, sim);
    std::vector<Observation> obs;
    for (const auto& s : tr.states)
        obs.push_back(observation::observe_exact(pb, s));
    SipsContext ctx{pb, *h, cfg};
    Rng rng(2);
    auto snaps = run(ctx, obs, rng);
    CHECK(snaps[0].probs[1] == doctest::Approx(0.5));
    for (std::size_t t = 1; t < snaps.size(); ++t)
        CHECK(snaps[t].probs[1] == 1.0);
}

TEST_CASE("a single goal has posterior one throughout")
{
    Problem pb = testutil::navigation(testutil::open_grid(4, 4, 1, 1), {{4, 4}});
    auto h = planner::make_heuristic(planner::HeuristicKind::Manhattan, pb);
    SipsConfig cfg;
    cfg.noise = {0.05, 0.5};
    cfg.rejuvenation.enabled = true;
    auto obs = noisy_run(pb, *h, 0, cfg.agent, cfg.noise, 6, 5);
    SipsContext ctx{pb, *h, cfg};
    Rng rng(1);
    for (const auto& s : run(ctx, obs, rng))
        CHECK(s.probs == std::vector<double>{1.0});
}
