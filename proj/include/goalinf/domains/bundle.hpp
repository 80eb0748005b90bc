#pragma once

#include "goalinf/common/random.hpp"
#include "goalinf/pddl/problem.hpp"
#include "goalinf/planner/heuristic.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace goalinf::domains {

class UnknownDomainError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// $GOALINF_DATA_DIR if set, else the data directory of the source tree.
std::filesystem::path default_data_dir();

std::vector<std::string> bundle_names();

struct DomainBundle
{
    std::string name;
    std::filesystem::path dir;
    std::string domain_text;
    std::shared_ptr<const pddl::Domain> domain;
    std::vector<std::filesystem::path> problem_files;   // problems/*.pddl, sorted
    std::vector<std::filesystem::path> scenario_files;  // scenarios/*.pddl, sorted
    planner::HeuristicKind default_heuristic = planner::HeuristicKind::Manhattan;
    std::size_t goal_count = 0;

    [[nodiscard]] pddl::Problem load_problem(std::size_t index) const;
    [[nodiscard]] pddl::Problem load_problem(const std::filesystem::path& file) const;
    /// Problem file or scenario by stem, e.g. "p01".
    [[nodiscard]] std::filesystem::path find(const std::string& stem) const;
};

/// Loads and validates `<data_dir>/domains/<name>`: every problem must parse
/// and declare goal_count goals.
DomainBundle load_bundle(const std::string& name, const std::filesystem::path& data_dir = default_data_dir());

/// Random valid state of `pb` for asynchronous value iteration.
using StateSampler = std::function<pddl::State(Rng&)>;

/// The sampler keeps a reference to `pb`.
StateSampler state_sampler(const std::string& domain, const pddl::Problem& pb);

struct GenerateParams
{
    // Grid domains; 0 selects the domain default (7x7 doors-keys-gems, 5x5 taxi).
    int width = 0;
    int height = 0;
    int keys = 2;
    int doors = 2;
    int gems = 3;
    double wall_density = 0.15;
    // Taxi: depot holding the passenger ('R', 'G', 'B' or 'Y').
    char passenger = 'R';
    // Block Words.
    std::vector<std::string> words{"draw", "ward", "wad", "raw", "dar"};
    // Intrusion Detection: host count and goal subsets sizes (must sum to hosts).
    int hosts = 10;
    std::vector<int> subset_sizes{3, 3, 2, 2};

    int max_attempts = 500;
};

/// Problem text for a fresh instance. Every goal is verified reachable by
/// unlimited A*. Throws GenerationError when no instance is found within
/// max_attempts, std::invalid_argument for out-of-range parameters.
std::string generate_problem(const std::string& domain, const GenerateParams& params, Rng& rng,
                             const std::string& name = "generated");

}  // namespace goalinf::domains
