#pragma once

#include "goalinf/pddl/problem.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace goalinf::planner {

struct PlanStep
{
    pddl::State state;  // expected state before `action`
    pddl::GroundAction action;
    bool operator==(const PlanStep&) const = default;
};

/// Time-indexed partial plan: steps[i] is expected at timestep start_time + i.
struct PartialPlan
{
    std::size_t start_time = 1;
    std::vector<PlanStep> steps;
    bool complete = false;

    /// One past the last timestep covered.
    [[nodiscard]] std::size_t end_time() const { return start_time + steps.size(); }
    [[nodiscard]] bool covers(std::size_t t) const { return t >= start_time && t < end_time(); }
    [[nodiscard]] const PlanStep& at(std::size_t t) const { return steps.at(t - start_time); }
    bool operator==(const PartialPlan&) const = default;
};

struct SearchStats
{
    std::size_t nodes_expanded = 0;
    std::optional<std::size_t> budget;  // nullopt = unlimited
    bool found_goal = false;
};

struct SearchResult
{
    PartialPlan plan;
    SearchStats stats;
};

}  // namespace goalinf::planner
