#pragma once

#include "goalinf/bench/experiment.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace goalinf::bench {

/// Malformed or inconsistent configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// YAML experiment config. `seed` is mandatory; see README for the keys.
ExperimentConfig parse_experiment_config(const std::string& yaml_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& file);

RobustnessConfig parse_robustness_config(const std::string& yaml_text);
RobustnessConfig load_robustness_config(const std::filesystem::path& file);

}  // namespace goalinf::bench
