#pragma once

#include "goalinf/agent/agent.hpp"
#include "goalinf/bench/trajectory.hpp"
#include "goalinf/domains/bundle.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace goalinf::bench {

struct DatasetSpec
{
    std::string domain;
    std::size_t n = 30;
    /// A* plans when true, replanning-agent runs otherwise.
    bool optimal = false;
    std::uint64_t seed = 0;
    agent::AgentParams agent;
    /// Planner heuristic; the bundle default when unset.
    std::optional<planner::HeuristicKind> heuristic;
    /// Action limit for agent runs; 0 means 3 * optimal steps + 10.
    std::size_t t_max = 0;
    /// Problem stems to draw from; all bundled problems when empty.
    std::vector<std::string> problems;

    void validate() const;
};

struct DatasetEntry
{
    std::string file;  // relative to the dataset directory
    std::string problem;
    std::string goal;
    std::uint64_t seed = 0;
    std::size_t length = 0;         // states, the T of the quartile metrics
    std::size_t steps = 0;          // actions taken
    std::size_t optimal_steps = 0;  // actions in an optimal plan
    bool reached = true;
};

struct Dataset
{
    DatasetSpec spec;
    std::filesystem::path dir;
    std::vector<DatasetEntry> entries;
    std::vector<std::string> warnings;
};

std::string provenance(const DatasetSpec& spec, planner::HeuristicKind h);

/// Trajectory i targets goal i mod |G| of problem (i div |G|) mod |P|.
/// Writes traj-NNN.jsonl files and manifest.json into `out_dir`.
Dataset generate_dataset(const DatasetSpec& spec, const std::filesystem::path& out_dir,
                         const std::filesystem::path& data_dir = domains::default_data_dir());

/// Reads manifest.json.
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace goalinf::bench
