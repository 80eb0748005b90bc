#include "goalinf/sips/sips.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace goalinf::sips {

using observation::Observation;
using pddl::State;

void SipsConfig::validate() const
{
    if (particles_per_goal < 1)
        throw std::invalid_argument("particles_per_goal must be >= 1");
    if (!(ess_threshold >= 0))
        throw std::invalid_argument("ess_threshold must be non-negative");
    if (!(rejuvenation.goal_move_prob >= 0 && rejuvenation.goal_move_prob <= 1))
        throw std::invalid_argument("goal_move_prob must lie in [0, 1]");
    if (!(rejuvenation.temperature > 0))
        throw std::invalid_argument("rejuvenation temperature must be positive");
    agent.validate();
    noise.validate();
}

bool Particle::dead() const { return log_weight == -kInf; }

std::vector<double> ParticleSet::log_weights() const
{
    std::vector<double> w;
    w.reserve(particles.size());
    for (const auto& p : particles)
        w.push_back(p.log_weight);
    return w;
}

double ess(std::span<const double> log_weights)
{
    const double a = log_sum_exp(log_weights);
    if (a == -kInf)
        return 0;
    std::vector<double> twice(log_weights.begin(), log_weights.end());
    for (auto& x : twice)
        x *= 2;
    return std::exp(2 * a - log_sum_exp(twice));
}

std::vector<std::size_t> systematic_indices(std::span<const double> log_weights, std::size_t k, Rng& rng)
{
    if (log_sum_exp(log_weights) == -kInf)
        throw AllParticlesDeadError("all particles have zero weight");
    const auto w = normalize_log_weights(log_weights);
    std::vector<std::size_t> out;
    out.reserve(k);
    const double u0 = uniform01(rng) / static_cast<double>(k);
    double cum = w[0];
    std::size_t j = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double u = u0 + static_cast<double>(i) / static_cast<double>(k);
        while (u >= cum && j + 1 < w.size())
            cum += w[++j];
        // Rounding can leave cum slightly below 1; never land on a dead index.
        while (w[j] == 0 && j > 0)
            --j;
        out.push_back(j);
    }
    return out;
}

ParticleSet init(const SipsContext& ctx, Rng& rng)
{
    ctx.config.validate();
    ParticleSet ps;
    const std::size_t goals = ctx.problem.goals().size();
    for (std::size_t g = 0; g < goals; ++g) {
        for (std::size_t i = 0; i < ctx.config.particles_per_goal; ++i) {
            Particle p;
            p.goal = g;
            p.states.push_back(ctx.problem.initial_state());
            p.rng = split(rng);
            ps.particles.push_back(std::move(p));
        }
    }
    return ps;
}

void resample(ParticleSet& ps, Rng& rng)
{
    const auto idx = systematic_indices(ps.log_weights(), ps.particles.size(), rng);
    std::vector<Particle> next;
    next.reserve(idx.size());
    for (auto i : idx) {
        Particle p = ps.particles[i];
        p.log_weight = 0;
        p.rng = split(rng);
        next.push_back(std::move(p));
    }
    ps.particles = std::move(next);
    ++ps.totals.resample_events;
}

ExtendResult extend(Particle& p, const SipsContext& ctx)
{
    const std::size_t t = p.length();
    const State& s = p.states.back();
    const agent::PlanPtr prev = p.plans.empty() ? nullptr : p.plans.back();
    auto up = agent::update_plan(ctx.problem, ctx.heuristic, ctx.config.agent, t, s, prev,
                                 ctx.problem.goals()[p.goal], p.rng);
    const auto& a = agent::select_action(t, s, *up.plan);
    State next = pddl::apply(ctx.problem, s, a);
    p.actions.push_back(a);
    p.plans.push_back(up.plan);
    p.replanned.push_back(up.replanned ? 1 : 0);
    p.states.push_back(std::move(next));
    return {up.replanned, up.stats};
}

namespace {

State state_from_observation(const Observation& o)
{
    State s;
    s.bits = o.bits;
    s.fluents.reserve(o.fluents.size());
    for (double f : o.fluents)
        s.fluents.push_back(static_cast<std::int64_t>(std::llround(f)));
    return s;
}

double total(const std::vector<double>& xs, std::size_t from = 0)
{
    double acc = 0;
    for (std::size_t i = from; i < xs.size(); ++i)
        acc += xs[i];
    return acc;
}

void extend_to(Particle& p, std::size_t n, std::span<const Observation> obs, const SipsContext& ctx,
               RejuvenationResult& res)
{
    while (p.length() < n) {
        auto ex = extend(p, ctx);
        res.nodes_expanded += ex.stats.nodes_expanded;
        res.planner_calls += ex.replanned ? 1 : 0;
        p.loglik.push_back(observation::log_likelihood(obs[p.length() - 1], p.states.back(), ctx.config.noise));
    }
}

bool mh_accept(double cur_ll, double new_ll, double log_alpha, Rng& rng)
{
    if (cur_ll == -kInf)
        return new_ll > -kInf;
    if (new_ll == -kInf)
        return false;
    if (log_alpha >= 0)
        return true;
    return uniform01(rng) < std::exp(log_alpha);
}

// Timestep range whose choice in the replan move resamples from the
// replanning event at or before it: [r, next replanning time).
struct Block
{
    std::size_t begin = 1;
    std::size_t end = 1;  // exclusive
};

Block block_of(const Particle& p, std::size_t t_star)
{
    const std::size_t m = p.plans.size();
    Block b;
    b.begin = 1;
    for (std::size_t t = t_star; t >= 1; --t) {
        if (p.replanned[t - 1]) {
            b.begin = t;
            break;
        }
    }
    b.end = m + 1;
    for (std::size_t t = t_star + 1; t <= m; ++t) {
        if (p.replanned[t - 1]) {
            b.end = t;
            break;
        }
    }
    return b;
}

double block_mass(const std::vector<double>& q, const Block& b)
{
    double acc = 0;
    for (std::size_t t = b.begin; t < b.end; ++t)
        acc += q[t - 1];
    return acc;
}

std::size_t draw(const std::vector<double>& probs, Rng& rng)
{
    double u = uniform01(rng);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (u < probs[i])
            return i;
        u -= probs[i];
    }
    for (std::size_t i = probs.size(); i-- > 0;)
        if (probs[i] > 0)
            return i;
    return 0;
}

RejuvenationResult goal_move(Particle& p, std::span<const Observation> obs, const SipsContext& ctx)
{
    RejuvenationResult res;
    res.goal_move = true;
    const std::size_t n = p.length();
    const auto& goals = ctx.problem.goals();
    const State anchor = state_from_observation(obs[n - 1]);
    std::vector<double> logits;
    for (const auto& g : goals)
        logits.push_back(-ctx.heuristic(anchor, g) / ctx.config.rejuvenation.temperature);
    std::vector<double> q;
    if (log_sum_exp(logits) == -kInf)
        q.assign(goals.size(), 1.0 / static_cast<double>(goals.size()));
    else
        q = softmax(logits);
    const std::size_t g_new = draw(q, p.rng);

    Particle np;
    np.goal = g_new;
    np.log_weight = p.log_weight;
    np.rng = split(p.rng);
    np.states.push_back(ctx.problem.initial_state());
    np.loglik.push_back(observation::log_likelihood(obs[0], np.states[0], ctx.config.noise));
    extend_to(np, n, obs, ctx, res);

    const double cur = total(p.loglik);
    const double prop = total(np.loglik);
    const double log_alpha = prop - cur + std::log(q[p.goal]) - std::log(q[g_new]);
    if (mh_accept(cur, prop, log_alpha, p.rng)) {
        np.rng = std::move(p.rng);
        p = std::move(np);
        res.accepted = true;
    }
    return res;
}

RejuvenationResult replan_move(Particle& p, std::span<const Observation> obs, const SipsContext& ctx)
{
    RejuvenationResult res;
    const std::size_t n = p.length();
    const std::size_t m = n - 1;
    if (m == 0)
        return res;
    const auto& nm = ctx.config.noise;
    const auto q_old = replan_time_proposal(m, std::min(first_divergence(p, obs, nm), m));
    const std::size_t t_star = draw(q_old, p.rng) + 1;
    const Block b_old = block_of(p, t_star);
    const std::size_t r = b_old.begin;

    Particle np;
    np.goal = p.goal;
    np.log_weight = p.log_weight;
    np.rng = split(p.rng);
    np.states.assign(p.states.begin(), p.states.begin() + static_cast<std::ptrdiff_t>(r));
    np.loglik.assign(p.loglik.begin(), p.loglik.begin() + static_cast<std::ptrdiff_t>(r));
    np.actions.assign(p.actions.begin(), p.actions.begin() + static_cast<std::ptrdiff_t>(r - 1));
    np.plans.assign(p.plans.begin(), p.plans.begin() + static_cast<std::ptrdiff_t>(r - 1));
    np.replanned.assign(p.replanned.begin(), p.replanned.begin() + static_cast<std::ptrdiff_t>(r - 1));
    extend_to(np, n, obs, ctx, res);

    const auto q_new = replan_time_proposal(m, std::min(first_divergence(np, obs, nm), m));
    const Block b_new = block_of(np, r);
    const double cur = total(p.loglik, r);
    const double prop = total(np.loglik, r);
    const double log_alpha = prop - cur + std::log(block_mass(q_new, b_new)) - std::log(block_mass(q_old, b_old));
    if (mh_accept(cur, prop, log_alpha, p.rng)) {
        np.rng = std::move(p.rng);
        p = std::move(np);
        res.accepted = true;
    }
    return res;
}

}  // namespace

std::size_t first_divergence(const Particle& p, std::span<const Observation> obs, const observation::NoiseModel& nm)
{
    for (std::size_t i = 0; i < p.states.size() && i < obs.size(); ++i) {
        const State& s = p.states[i];
        const Observation& o = obs[i];
        if (observation::atom_mismatches(o, s) > 0)
            return i + 1;
        for (std::size_t f = 0; f < s.fluents.size(); ++f)
            if (std::abs(o.fluents[f] - static_cast<double>(s.fluents[f])) > 2 * nm.sigma)
                return i + 1;
    }
    return 0;
}

std::vector<double> replan_time_proposal(std::size_t n, std::size_t t_div)
{
    std::vector<double> logits(n, 0.0);
    if (t_div > 0)
        for (std::size_t t = 1; t <= n; ++t)
            logits[t - 1] = -std::abs(static_cast<double>(t) - static_cast<double>(t_div)) / 2;
    return softmax(logits);
}

RejuvenationResult rejuvenate(Particle& p, std::span<const Observation> obs, const SipsContext& ctx)
{
    if (obs.size() < p.length())
        throw std::invalid_argument("rejuvenation needs an observation per trace state");
    const bool goal = ctx.problem.goals().size() > 1 &&
                      uniform01(p.rng) < ctx.config.rejuvenation.goal_move_prob;
    return goal ? goal_move(p, obs, ctx) : replan_move(p, obs, ctx);
}

void step(ParticleSet& ps, const Observation& o, const SipsContext& ctx, Rng& rng)
{
    const auto& cfg = ctx.config;
    if (ps.particles.empty())
        throw std::logic_error("step on an empty particle set");
    const std::size_t k = ps.particles.size();
    if (ps.tau() > 0) {
        const auto lw = ps.log_weights();
        if (ess(lw) / static_cast<double>(k) < cfg.ess_threshold) {
            resample(ps, rng);
            if (cfg.rejuvenation.enabled) {
                for (auto& p : ps.particles) {
                    auto r = rejuvenate(p, ps.observations, ctx);
                    ps.totals.nodes_expanded += r.nodes_expanded;
                    ps.totals.planner_calls += r.planner_calls;
                    ++ps.totals.proposals;
                    ps.totals.accepted += r.accepted ? 1 : 0;
                }
            }
        }
    }
    ps.observations.push_back(o);
    const std::size_t tau = ps.tau();
    bool alive = false;
    for (auto& p : ps.particles) {
        while (p.length() < tau) {
            auto ex = extend(p, ctx);
            ps.totals.nodes_expanded += ex.stats.nodes_expanded;
            ps.totals.planner_calls += ex.replanned ? 1 : 0;
        }
        const double ll = observation::log_likelihood(o, p.states.back(), cfg.noise);
        p.loglik.push_back(ll);
        p.log_weight += ll;
        alive = alive || !p.dead();
    }
    if (!alive)
        throw AllParticlesDeadError("every particle is inconsistent with the observation at t=" +
                                    std::to_string(tau));
}

PosteriorSnapshot goal_posterior(const ParticleSet& ps, std::size_t goal_count)
{
    PosteriorSnapshot snap;
    snap.t = ps.tau();
    const auto lw = ps.log_weights();
    std::vector<std::vector<double>> by_goal(goal_count);
    for (std::size_t i = 0; i < ps.particles.size(); ++i)
        by_goal.at(ps.particles[i].goal).push_back(lw[i]);
    std::vector<double> mass;
    for (const auto& v : by_goal)
        mass.push_back(log_sum_exp(v));
    snap.probs = normalize_log_weights(mass);
    snap.ess = ess(lw);
    snap.nodes_expanded = ps.totals.nodes_expanded;
    snap.planner_calls = ps.totals.planner_calls;
    return snap;
}

std::vector<PosteriorSnapshot> run(const SipsContext& ctx, std::span<const Observation> obs, Rng& rng)
{
    auto ps = init(ctx, rng);
    std::vector<PosteriorSnapshot> out;
    out.reserve(obs.size());
    for (const auto& o : obs) {
        step(ps, o, ctx, rng);
        out.push_back(goal_posterior(ps, ctx.problem.goals().size()));
    }
    return out;
}

}  // namespace goalinf::sips
