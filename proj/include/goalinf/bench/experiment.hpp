#pragma once

#include "goalinf/baselines/birl.hpp"
#include "goalinf/bench/dataset.hpp"
#include "goalinf/bench/metrics.hpp"
#include "goalinf/sips/sips.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goalinf::bench {

enum class Method { Sips, BirlUnbiased, BirlOracle, Prp };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct MethodParams
{
    sips::SipsConfig sips;
    double alpha = 1.0;
    double beta = 1.0;
    double discount = 0.9;
    /// Async VI backups per goal; 0 selects the per-domain default.
    std::size_t vi_iters = 0;
    /// Heuristic for SIPS and PRP; the bundle default when unset.
    std::optional<planner::HeuristicKind> heuristic;
    /// When set, SIPS sees observations corrupted by this channel
    /// (seeded per trajectory). Baselines always see the true states.
    std::optional<observation::NoiseModel> observation_noise;

    void validate() const;
};

/// 250,000 (taxi 10,000) for unbiased sampling, 10,000 (taxi 2,500) for
/// oracle sampling.
std::size_t default_vi_iters(const std::string& domain, Method m);

struct Inference
{
    std::vector<PosteriorSnapshot> snapshots;
    double setup_seconds = 0;
    std::vector<double> step_seconds;
    double nodes = 0;
};

/// SIPS over one trajectory.
Inference infer_sips(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp,
                     planner::HeuristicKind h, std::uint64_t seed);
/// PRP over one trajectory with a fresh completion-cost cache.
Inference infer_prp(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp, planner::HeuristicKind h);

/// Per-goal Q-functions for BIRL. Unbiased mode samples states with the
/// domain sampler; oracle mode backs up `oracle_states` uniformly.
struct BirlModel
{
    std::vector<baselines::QFunction> qfns;
    double seconds = 0;
    double nodes = 0;  // mean backups per goal
};
BirlModel solve_birl(const pddl::Problem& pb, const std::string& domain, Method m, const MethodParams& mp,
                     const std::vector<pddl::State>& oracle_states, std::uint64_t seed);
/// BIRL over one trajectory; setup_seconds is the model's VI time.
Inference infer_birl(const pddl::Problem& pb, const Trajectory& tr, const MethodParams& mp, const BirlModel& model);

/// One header line {method, trajectory, goals}, then {t, probs, ess, nodes,
/// planner_calls} per timestep. No wall-clock values.
void write_snapshots(std::ostream& os, const pddl::Problem& pb, const std::string& method,
                     const std::string& trajectory, const std::vector<PosteriorSnapshot>& snaps);
struct SnapshotLog
{
    std::string method;
    std::string trajectory;
    std::vector<std::string> goals;
    std::vector<PosteriorSnapshot> snapshots;
};
SnapshotLog read_snapshots(std::istream& is);

struct ExperimentConfig
{
    std::uint64_t seed = 0;
    std::filesystem::path data_dir = domains::default_data_dir();
    DatasetSpec dataset;
    std::filesystem::path dataset_dir;
    std::vector<Method> methods{Method::Sips};
    MethodParams params;
    std::filesystem::path metrics_csv;
    std::filesystem::path snapshot_dir;  // <dir>/<method>/<trajectory stem>.jsonl

    void validate() const;
};

struct ExperimentResult
{
    std::vector<MetricsRow> rows;
    /// scores[m][i] for method m and dataset entry i; nullopt on failure.
    std::vector<std::vector<std::optional<TrajectoryScore>>> scores;
    std::vector<std::string> errors;
};

/// Runs every method on the dataset at cfg.dataset_dir (generated first when
/// it has no manifest). Writes snapshot logs and the metrics CSV when their
/// paths are set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Accuracy and node columns recomputed from the snapshot logs written by
/// run_experiment. Wall-clock columns stay zero; failed trajectories have no
/// log and are counted as failures.
MetricsRow metrics_from_logs(const Dataset& ds, const std::filesystem::path& snapshot_dir, Method m);

struct RobustnessSetting
{
    std::string label;
    agent::AgentParams params;
    /// Bundle default when unset.
    std::optional<planner::HeuristicKind> heuristic;
};

struct RobustnessConfig
{
    std::uint64_t seed = 0;
    std::filesystem::path data_dir = domains::default_data_dir();
    std::string domain;
    std::size_t n = 30;
    std::vector<RobustnessSetting> true_settings;
    std::vector<RobustnessSetting> assumed_settings;
    MethodParams params;
    std::filesystem::path work_dir;
    std::filesystem::path out_csv;

    void validate() const;
};

struct RobustnessCell
{
    std::string true_label;
    std::string assumed_label;
    double top1_q3 = 0;  // chance credit
    double p_q3 = 0;
    std::size_t failed = 0;
};

/// Top-1 at Q3 of SIPS for every (true, assumed) agent setting pair.
std::vector<RobustnessCell> run_robustness(const RobustnessConfig& cfg);

}  // namespace goalinf::bench
