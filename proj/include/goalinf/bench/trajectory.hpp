#pragma once

#include "goalinf/domains/bundle.hpp"
#include "goalinf/pddl/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace goalinf::bench {

/// A state sequence s_1..s_T and the actions between them
/// (actions.size() == states.size() - 1).
struct Trajectory
{
    std::string domain;
    std::string problem;  // problem stem within the bundle
    std::string goal;     // label of the true goal
    std::string provenance;
    std::uint64_t seed = 0;
    std::vector<pddl::State> states;
    std::vector<pddl::GroundAction> actions;

    [[nodiscard]] std::size_t length() const { return states.size(); }
};

/// True when states[0] is the initial state and each action is applicable
/// and leads to the next state.
bool replay_sound(const pddl::Problem& pb, const Trajectory& tr);

/// Builds a trajectory by applying `actions` from the initial state.
Trajectory replay(const pddl::Problem& pb, const std::vector<pddl::GroundAction>& actions);

/// JSON-lines: a manifest line, then one {t, facts, fluents, action} line per
/// state. The last state's action is null.
void write_trajectory(std::ostream& os, const pddl::Problem& pb, const Trajectory& tr);
void write_trajectory(const std::filesystem::path& file, const pddl::Problem& pb, const Trajectory& tr);

struct LoadedTrajectory
{
    std::shared_ptr<const pddl::Problem> problem;
    Trajectory trajectory;
};

/// Reads a trajectory and loads its problem from the named bundle.
LoadedTrajectory read_trajectory(const std::filesystem::path& file,
                                 const std::filesystem::path& data_dir = domains::default_data_dir());
/// Reads against an already loaded problem; the manifest must name it.
Trajectory read_trajectory(std::istream& is, const pddl::Problem& pb);

/// State from sorted fact strings and fluent values keyed by fluent string.
pddl::State parse_state(const pddl::Problem& pb, const std::vector<std::string>& facts,
                        const std::vector<std::pair<std::string, std::int64_t>>& fluents);

}  // namespace goalinf::bench
