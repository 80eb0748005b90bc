#pragma once

#include "goalinf/agent/agent.hpp"
#include "goalinf/common/posterior.hpp"
#include "goalinf/common/random.hpp"
#include "goalinf/observation/noise.hpp"
#include "goalinf/planner/heuristic.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace goalinf::sips {

struct RejuvenationConfig
{
    bool enabled = false;
    double goal_move_prob = 0.25;
    double temperature = 1.0;
};

struct SipsConfig
{
    std::size_t particles_per_goal = 10;
    double ess_threshold = 0.25;
    agent::AgentParams agent;
    observation::NoiseModel noise;
    RejuvenationConfig rejuvenation;

    void validate() const;
};

/// One hypothesis: a goal and the agent trace s_1..s_tau that explains the
/// observations so far. plans[i] / actions[i] belong to timestep i + 1.
struct Particle
{
    std::size_t goal = 0;
    std::vector<pddl::State> states;
    std::vector<pddl::GroundAction> actions;
    std::vector<agent::PlanPtr> plans;
    std::vector<std::uint8_t> replanned;  // per timestep of `plans`
    std::vector<double> loglik;           // log P(o_t | s_t) per state
    double log_weight = 0;
    Rng rng;

    [[nodiscard]] std::size_t length() const { return states.size(); }
    [[nodiscard]] bool dead() const;
};

struct SearchTotals
{
    std::size_t nodes_expanded = 0;
    std::size_t planner_calls = 0;
    std::size_t resample_events = 0;
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

struct ParticleSet
{
    std::vector<Particle> particles;
    std::vector<observation::Observation> observations;  // o_1..o_tau
    SearchTotals totals;

    [[nodiscard]] std::size_t tau() const { return observations.size(); }
    [[nodiscard]] std::vector<double> log_weights() const;
};

using goalinf::PosteriorSnapshot;

class AllParticlesDeadError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Immutable inputs shared by every SIPS operation.
struct SipsContext
{
    const pddl::Problem& problem;
    const planner::Heuristic& heuristic;
    SipsConfig config;
};

/// (sum w)^2 / sum w^2 from log weights; -inf entries count as zero weight.
double ess(std::span<const double> log_weights);

/// Systematic resampling: k ancestor indices for normalized weights.
std::vector<std::size_t> systematic_indices(std::span<const double> log_weights, std::size_t k, Rng& rng);

/// particles_per_goal particles for each goal, each at s_1 = init, weight 0.
ParticleSet init(const SipsContext& ctx, Rng& rng);

/// Replaces the set by a systematic resample with uniform weights. Offspring
/// get fresh generator streams drawn from `rng`.
void resample(ParticleSet& ps, Rng& rng);

struct RejuvenationResult
{
    bool accepted = false;
    bool goal_move = false;
    std::size_t nodes_expanded = 0;
    std::size_t planner_calls = 0;
};

/// One Metropolis-Hastings move against observations `obs` (which must cover
/// the particle's whole trace). Rejected proposals leave `p` unchanged.
RejuvenationResult rejuvenate(Particle& p, std::span<const observation::Observation> obs, const SipsContext& ctx);

/// Incorporates o_tau: ESS check and optional resample/rejuvenate on the
/// current set, then extension of every particle to tau and reweighting.
void step(ParticleSet& ps, const observation::Observation& o, const SipsContext& ctx, Rng& rng);

PosteriorSnapshot goal_posterior(const ParticleSet& ps, std::size_t goal_count);

/// Runs SIPS over o_1..o_T, one snapshot per timestep.
std::vector<PosteriorSnapshot> run(const SipsContext& ctx, std::span<const observation::Observation> obs,
                                   Rng& rng);

// Building blocks shared with the exact-inference tests.

struct ExtendResult
{
    bool replanned = false;
    planner::SearchStats stats;
};

/// Appends one timestep to the trace: plan/act at t = length(), then s_{t+1}.
/// Does not touch `loglik` or the weight.
ExtendResult extend(Particle& p, const SipsContext& ctx);

/// First timestep whose hypothesized state disagrees with its observation,
/// or 0 when none does.
std::size_t first_divergence(const Particle& p, std::span<const observation::Observation> obs,
                             const observation::NoiseModel& nm);

/// Proposal over replanning times 1..n peaked at t_div (uniform if t_div = 0).
std::vector<double> replan_time_proposal(std::size_t n, std::size_t t_div);

}  // namespace goalinf::sips
