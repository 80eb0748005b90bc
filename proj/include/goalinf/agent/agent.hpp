#pragma once

#include "goalinf/common/random.hpp"
#include "goalinf/planner/astar.hpp"
#include "goalinf/planner/heuristic.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace goalinf::agent {

struct AgentParams
{
    int r = 2;
    double q = 0.95;
    double gamma = 0.1;
    planner::HeuristicKind heuristic = planner::HeuristicKind::Manhattan;
    /// Skip budget sampling and search without an expansion limit.
    bool unlimited_budget = false;

    /// Throws std::invalid_argument unless r >= 1, 0 < q < 1, gamma > 0.
    void validate() const;
};

/// Raised when select_action is asked for a step the plan does not predict.
class InconsistencyError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

using PlanPtr = std::shared_ptr<const planner::PartialPlan>;

/// Uniform draw of a goal index.
std::size_t sample_goal(const pddl::Problem& pb, Rng& rng);

/// Successes (probability q each) before the r-th failure.
std::size_t sample_budget(int r, double q, Rng& rng);

struct PlanUpdate
{
    PlanPtr plan;
    bool replanned = false;
    std::size_t budget = 0;  // meaningful only when replanned with a sampled budget
    planner::SearchStats stats;
};

/// Keeps `prev` when it predicts s_t at time t; otherwise replans from s_t.
/// The returned plan only stores steps from its start_time on: earlier steps
/// of the concatenated plan are those of the plans already in the trace.
/// Once the goal holds, or when search yields no step, the plan is a single
/// no-op at t.
PlanUpdate update_plan(const pddl::Problem& pb, const planner::Heuristic& h, const AgentParams& params,
                       std::size_t t, const pddl::State& s_t, const PlanPtr& prev, const pddl::GoalSpec& g,
                       Rng& rng);

/// The action `p` prescribes at (t, s_t). Throws InconsistencyError otherwise.
const pddl::GroundAction& select_action(std::size_t t, const pddl::State& s_t, const planner::PartialPlan& p);

/// Time-aligned record of a simulated agent. states[i] is s_{i+1};
/// actions[i] and plans[i] belong to timestep i+1.
struct AgentTrace
{
    std::size_t goal = 0;
    std::vector<pddl::State> states;
    std::vector<pddl::GroundAction> actions;
    std::vector<PlanPtr> plans;
    std::vector<std::size_t> budgets;
    std::vector<std::size_t> replan_times;
    std::size_t planner_calls = 0;
    std::size_t nodes_expanded = 0;
};

/// Runs the agent from the initial state until the goal holds or t_max
/// actions were taken.
AgentTrace simulate(const pddl::Problem& pb, const planner::Heuristic& h, std::size_t goal,
                    const AgentParams& params, std::size_t t_max, Rng& rng);

}  // namespace goalinf::agent
