#include "goalinf/baselines/prp.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/planner/astar.hpp"

#include <cmath>

namespace goalinf::baselines {

double PrpCache::completion_cost(const pddl::State& s, std::size_t goal)
{
    if (memo_.empty())
        memo_.resize(pb_.goals().size());
    auto& m = memo_.at(goal);
    if (auto it = m.find(s); it != m.end())
        return it->second;
    auto res = planner::astar(pb_, s, pb_.goals()[goal], h_, std::nullopt);
    ++calls_;
    nodes_ += res.stats.nodes_expanded;
    const double c = res.plan.complete ? static_cast<double>(res.plan.steps.size()) : kInf;
    m.emplace(s, c);
    return c;
}

std::vector<PosteriorSnapshot> prp_posteriors(const pddl::Problem& pb, std::span<const pddl::State> states,
                                              double beta, PrpCache& cache)
{
    const std::size_t n = pb.goals().size();
    std::vector<PosteriorSnapshot> out;
    if (states.empty())
        return out;
    std::vector<double> optimal(n);
    for (std::size_t g = 0; g < n; ++g)
        optimal[g] = cache.completion_cost(states[0], g);
    for (std::size_t t = 1; t <= states.size(); ++t) {
        std::vector<double> logits(n);
        for (std::size_t g = 0; g < n; ++g) {
            const double c = cache.completion_cost(states[t - 1], g);
            logits[g] = (c == kInf || optimal[g] == kInf)
                            ? -kInf
                            : -beta * ((static_cast<double>(t - 1) + c) - optimal[g]);
        }
        PosteriorSnapshot snap;
        snap.t = t;
        if (log_sum_exp(logits) == -kInf)
            snap.probs.assign(n, 1.0 / static_cast<double>(n));
        else
            snap.probs = normalize_log_weights(logits);
        snap.nodes_expanded = cache.nodes_expanded();
        snap.planner_calls = cache.planner_calls();
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace goalinf::baselines
