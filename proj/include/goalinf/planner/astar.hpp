#pragma once

#include "goalinf/common/random.hpp"
#include "goalinf/planner/heuristic.hpp"
#include "goalinf/planner/plan.hpp"

#include <optional>
#include <span>
#include <vector>

namespace goalinf::planner {

/// Below this search noise the probabilistic planner selects the argmin.
inline constexpr double kMinGamma = 1e-8;

/// A* with unit costs. Ties on f are broken FIFO; successors are generated in
/// available_actions order. When `budget` expansions are used up, the plan
/// leads to the last node popped and is marked incomplete. Plans start at
/// start_time = 1.
SearchResult astar(const pddl::Problem& pb, const pddl::State& s0, const pddl::GoalSpec& g, const Heuristic& h,
                   std::optional<std::size_t> budget = std::nullopt);

/// Stochastic A*: each expansion picks an open node with probability
/// proportional to exp(-f/gamma) over the whole open list.
SearchResult probabilistic_astar(const pddl::Problem& pb, const pddl::State& s0, const pddl::GoalSpec& g,
                                 const Heuristic& h, double gamma, std::optional<std::size_t> eta, Rng& rng);

/// Selection distribution used by probabilistic_astar for a list of f values.
std::vector<double> selection_probabilities(std::span<const double> f, double gamma);

}  // namespace goalinf::planner
