#include "goalinf/agent/agent.hpp"

#include "goalinf/pddl/semantics.hpp"

#include <random>

namespace goalinf::agent {

using planner::PartialPlan;
using pddl::State;

void AgentParams::validate() const
{
    if (r < 1)
        throw std::invalid_argument("agent parameter r must be >= 1");
    if (!(q > 0 && q < 1))
        throw std::invalid_argument("agent parameter q must lie in (0, 1)");
    if (!(gamma > 0))
        throw std::invalid_argument("agent parameter gamma must be > 0");
}

std::size_t sample_goal(const pddl::Problem& pb, Rng& rng)
{
    if (pb.goals().empty())
        throw std::invalid_argument("problem has no goals");
    return std::uniform_int_distribution<std::size_t>(0, pb.goals().size() - 1)(rng);
}

std::size_t sample_budget(int r, double q, Rng& rng)
{
    if (q <= 0)
        return 0;
    // std::negative_binomial_distribution(k, p) counts failures before the
    // k-th success; our "success" is stopping, which happens w.p. 1 - q.
    std::negative_binomial_distribution<std::size_t> nb(static_cast<std::size_t>(r), 1.0 - q);
    return nb(rng);
}

namespace {

PlanPtr noop_plan(std::size_t t, const State& s)
{
    auto p = std::make_shared<PartialPlan>();
    p->start_time = t;
    p->steps.push_back({s, pddl::GroundAction::noop()});
    p->complete = false;
    return p;
}

}  // namespace

PlanUpdate update_plan(const pddl::Problem& pb, const planner::Heuristic& h, const AgentParams& params,
                       std::size_t t, const State& s_t, const PlanPtr& prev, const pddl::GoalSpec& g, Rng& rng)
{
    PlanUpdate out;
    if (prev && prev->covers(t) && prev->at(t).state == s_t) {
        out.plan = prev;
        return out;
    }
    if (pddl::satisfies(pb, s_t, g)) {
        out.plan = std::make_shared<PartialPlan>(PartialPlan{t, {{s_t, pddl::GroundAction::noop()}}, true});
        return out;
    }
    out.replanned = true;
    std::optional<std::size_t> eta;
    if (!params.unlimited_budget) {
        out.budget = sample_budget(params.r, params.q, rng);
        eta = out.budget;
    }
    auto res = planner::probabilistic_astar(pb, s_t, g, h, params.gamma, eta, rng);
    out.stats = res.stats;
    if (res.plan.steps.empty()) {
        out.plan = noop_plan(t, s_t);
        return out;
    }
    res.plan.start_time = t;
    out.plan = std::make_shared<PartialPlan>(std::move(res.plan));
    return out;
}

const pddl::GroundAction& select_action(std::size_t t, const State& s_t, const PartialPlan& p)
{
    if (!p.covers(t))
        throw InconsistencyError("plan does not cover timestep " + std::to_string(t));
    const auto& step = p.at(t);
    if (!(step.state == s_t))
        throw InconsistencyError("plan expects a different state at timestep " + std::to_string(t));
    return step.action;
}

AgentTrace simulate(const pddl::Problem& pb, const planner::Heuristic& h, std::size_t goal,
                    const AgentParams& params, std::size_t t_max, Rng& rng)
{
    if (t_max < 1)
        throw std::invalid_argument("t_max must be >= 1");
    const auto& g = pb.goals().at(goal);
    AgentTrace tr;
    tr.goal = goal;
    tr.states.push_back(pb.initial_state());
    PlanPtr plan;
    while (tr.actions.size() < t_max) {
        const State& s = tr.states.back();
        if (pddl::satisfies(pb, s, g))
            break;
        const std::size_t t = tr.states.size();
        auto up = update_plan(pb, h, params, t, s, plan, g, rng);
        if (up.replanned) {
            ++tr.planner_calls;
            tr.nodes_expanded += up.stats.nodes_expanded;
            tr.replan_times.push_back(t);
            if (!params.unlimited_budget)
                tr.budgets.push_back(up.budget);
        }
        plan = up.plan;
        const auto& a = select_action(t, s, *plan);
        tr.actions.push_back(a);
        tr.plans.push_back(plan);
        tr.states.push_back(pddl::apply(pb, s, a));
    }
    return tr;
}

}  // namespace goalinf::agent
