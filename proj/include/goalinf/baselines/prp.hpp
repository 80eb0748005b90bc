#pragma once

#include "goalinf/common/posterior.hpp"
#include "goalinf/planner/heuristic.hpp"

#include <span>
#include <unordered_map>
#include <vector>

namespace goalinf::baselines {

/// Memoized optimal completion costs per (state, goal).
class PrpCache
{
public:
    PrpCache(const pddl::Problem& pb, const planner::Heuristic& h) : pb_(pb), h_(h) {}

    /// Length of an optimal plan from s to goal g; kInf if none exists.
    double completion_cost(const pddl::State& s, std::size_t goal);

    [[nodiscard]] std::size_t nodes_expanded() const { return nodes_; }
    [[nodiscard]] std::size_t planner_calls() const { return calls_; }

private:
    const pddl::Problem& pb_;
    const planner::Heuristic& h_;
    std::vector<std::unordered_map<pddl::State, double, pddl::StateHash>> memo_;
    std::size_t nodes_ = 0;
    std::size_t calls_ = 0;
};

/// Cost-difference goal posterior. At t the hypothesized plan for g is the
/// t - 1 actions so far plus an optimal completion from s_t, compared with
/// the optimal plan from s_1. Goals without a completion get likelihood 0;
/// if no goal has one, the snapshot is uniform.
std::vector<PosteriorSnapshot> prp_posteriors(const pddl::Problem& pb, std::span<const pddl::State> states,
                                              double beta, PrpCache& cache);

}  // namespace goalinf::baselines
