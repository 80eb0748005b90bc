#pragma once

#include "goalinf/pddl/problem.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace goalinf::planner {

enum class HeuristicKind { Manhattan, Maze, GoalCount, HAdd };

std::string_view to_string(HeuristicKind k);
std::optional<HeuristicKind> parse_heuristic_kind(std::string_view s);

/// Fluent names used by the spatial heuristics. Agent position is
/// (x_fluent, y_fluent); an object's location is (x_loc ?o, y_loc ?o); grid
/// cells carry (cell_x ?c, cell_y ?c).
struct HeuristicConfig
{
    std::string x_fluent = "xpos";
    std::string y_fluent = "ypos";
    std::string x_loc = "xloc";
    std::string y_loc = "yloc";
    std::string cell_x = "cx";
    std::string cell_y = "cy";
};

/// h(s, g) for one grounded problem. Values are >= 0, exactly 0 on goal
/// states, and +inf only when the goal is provably unreachable.
class Heuristic
{
public:
    virtual ~Heuristic() = default;
    [[nodiscard]] virtual double evaluate(const pddl::State& s, const pddl::GoalSpec& g) const = 0;
    [[nodiscard]] virtual HeuristicKind kind() const = 0;
    double operator()(const pddl::State& s, const pddl::GoalSpec& g) const { return evaluate(s, g); }
};

using HeuristicPtr = std::shared_ptr<const Heuristic>;

/// Throws std::invalid_argument when a spatial heuristic is requested for a
/// problem without the configured position fluents.
HeuristicPtr make_heuristic(HeuristicKind kind, const pddl::Problem& problem, const HeuristicConfig& cfg = {});

}  // namespace goalinf::planner
