#pragma once

#include "goalinf/common/random.hpp"
#include "goalinf/pddl/problem.hpp"

#include <cstdint>
#include <vector>

namespace goalinf::observation {

/// Independent bit flips on every dynamic ground atom and Gaussian noise on
/// every dynamic fluent.
struct NoiseModel
{
    double flip_prob = 0.05;
    double sigma = 0.25;

    [[nodiscard]] bool deterministic() const { return flip_prob == 0 && sigma == 0; }
    /// Throws std::invalid_argument unless 0 <= flip_prob < 0.5 and sigma >= 0.
    void validate() const;
};

/// Observed state: atoms in the same dense layout as pddl::State, fluents
/// real-valued.
struct Observation
{
    std::size_t atom_count = 0;
    std::vector<std::uint64_t> bits;
    std::vector<double> fluents;

    [[nodiscard]] bool test(std::size_t atom) const { return (bits[atom >> 6] >> (atom & 63)) & 1u; }
    bool operator==(const Observation&) const = default;
};

Observation observe_exact(const pddl::Problem& pb, const pddl::State& s);

Observation corrupt(const pddl::Problem& pb, const pddl::State& s, const NoiseModel& nm, Rng& rng);

/// log P(o | s). Under the deterministic model this is 0 for an exact match
/// and -inf otherwise.
double log_likelihood(const Observation& o, const pddl::State& s, const NoiseModel& nm);

/// Number of atoms on which o and s disagree.
std::size_t atom_mismatches(const Observation& o, const pddl::State& s);

}  // namespace goalinf::observation
