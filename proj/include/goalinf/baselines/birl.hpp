#pragma once

#include "goalinf/common/posterior.hpp"
#include "goalinf/common/random.hpp"
#include "goalinf/pddl/problem.hpp"

#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace goalinf::baselines {

enum class ViMode { Sync, AsyncUniform, AsyncOracle };

std::string_view to_string(ViMode m);

using StateSampler = std::function<pddl::State(Rng&)>;

struct ViConfig
{
    double discount = 0.9;
    ViMode mode = ViMode::Sync;
    /// Sweeps in sync mode, single-state updates in the async modes.
    std::size_t iters = 10000;
    /// Sync mode refuses reachable spaces larger than this.
    std::size_t state_bound = 1000000;
    StateSampler sampler;                  // AsyncUniform
    std::vector<pddl::State> oracle_states;  // AsyncOracle

    void validate() const;
};

/// Q-values for one goal under the indicator reward: entering a goal state
/// pays 1, goal states absorb with value 0, every other step pays 0.
class QFunction
{
public:
    /// Q-values in available_actions order.
    struct Entry
    {
        std::vector<double> q;
    };

    /// `pb` must outlive the Q-function.
    QFunction(const pddl::Problem& pb, ViMode mode, double discount) : pb_(&pb), mode_(mode), discount_(discount) {}

    /// Nullptr when the state was never updated (all its Q-values are 0).
    [[nodiscard]] const Entry* find(const pddl::State& s) const;
    /// Q(s, a); 0 for unvisited entries.
    [[nodiscard]] double q(const pddl::State& s, const pddl::GroundAction& a) const;
    /// max_a Q(s, a); 0 for unvisited states.
    [[nodiscard]] double value(const pddl::State& s) const;

    [[nodiscard]] ViMode mode() const { return mode_; }
    [[nodiscard]] double discount() const { return discount_; }
    [[nodiscard]] std::size_t iterations() const { return iterations_; }
    /// Single-state Bellman backups performed (the VI state-visit count).
    [[nodiscard]] std::size_t state_updates() const { return state_updates_; }
    [[nodiscard]] std::size_t size() const { return table_.size(); }
    /// Replaces the row of `s`; for hand-built tables.
    void set(const pddl::State& s, Entry e) { table_[s] = std::move(e); }

    /// Max-norm change of each sync sweep.
    [[nodiscard]] const std::vector<double>& residuals() const { return residuals_; }

private:
    friend QFunction value_iteration(const pddl::Problem&, const pddl::GoalSpec&, const ViConfig&, Rng&);

    const pddl::Problem* pb_;
    ViMode mode_;
    double discount_;
    std::size_t iterations_ = 0;
    std::size_t state_updates_ = 0;
    std::vector<double> residuals_;
    std::unordered_map<pddl::State, Entry, pddl::StateHash> table_;
};

/// Throws std::invalid_argument for iters = 0 or a missing sampler, and
/// std::length_error when sync mode meets more than state_bound states.
QFunction value_iteration(const pddl::Problem& pb, const pddl::GoalSpec& g, const ViConfig& cfg, Rng& rng);

/// States reachable from `s0` in breadth-first order, up to `bound`
/// (std::length_error beyond it).
std::vector<pddl::State> reachable_states(const pddl::Problem& pb, const pddl::State& s0, std::size_t bound);

/// Boltzmann-rational goal posterior. Snapshot t has seen the transitions
/// (s_1, a_1) .. (s_{t-1}, a_{t-1}); no-op or unavailable actions carry no
/// evidence and are skipped. Uniform goal prior.
std::vector<PosteriorSnapshot> birl_posteriors(const pddl::Problem& pb, std::span<const pddl::State> states,
                                               std::span<const pddl::GroundAction> actions,
                                               std::span<const QFunction> qfns, double alpha);

}  // namespace goalinf::baselines
