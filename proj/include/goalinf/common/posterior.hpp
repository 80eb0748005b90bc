#pragma once

#include <cstddef>
#include <vector>

namespace goalinf {

/// Goal posterior after observing o_1..o_t, as emitted by every inference
/// method.
struct PosteriorSnapshot
{
    std::size_t t = 0;
    std::vector<double> probs;  // indexed like Problem::goals()
    double ess = 0;             // particle methods only
    std::size_t nodes_expanded = 0;
    std::size_t planner_calls = 0;
};

}  // namespace goalinf
