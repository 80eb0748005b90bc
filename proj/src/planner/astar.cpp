#include "goalinf/planner/astar.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace goalinf::planner {

using pddl::State;

namespace {

struct Node
{
    State state;
    std::uint32_t parent;
    pddl::GroundAction action;
    std::uint32_t g;
    double f;
    std::uint64_t order;
};

constexpr std::uint32_t kNoParent = 0xffffffffu;

class Search
{
public:
    Search(const pddl::Problem& pb, const pddl::GoalSpec& g, const Heuristic& h) : pb_(pb), goal_(g), h_(h) {}

    /// Frontier policy: `Open` must provide push(idx), empty(), pop() -> idx,
    /// and erase(idx) for entries superseded by a cheaper path.
    template <class Open>
    SearchResult run(const State& s0, std::optional<std::size_t> budget, Open& open)
    {
        SearchResult res;
        res.stats.budget = budget;
        const double h0 = h_(s0, goal_);
        if (h0 == kInf) {
            res.plan.complete = false;
            return res;
        }
        add(s0, kNoParent, {}, 0, h0, open);
        std::uint32_t last = 0;
        bool stopped = false;
        while (!open.empty()) {
            const std::uint32_t n = open.pop();
            last = n;
            if (pddl::satisfies(pb_, nodes_[n].state, goal_)) {
                res.stats.found_goal = true;
                break;
            }
            if (budget && res.stats.nodes_expanded >= *budget) {
                stopped = true;
                break;
            }
            ++res.stats.nodes_expanded;
            const State parent_state = nodes_[n].state;
            const std::uint32_t g = nodes_[n].g + 1;
            for (auto& a : pddl::available_actions(pb_, parent_state)) {
                State child = pddl::apply(pb_, parent_state, a);
                auto it = best_.find(child);
                if (it != best_.end() && nodes_[it->second].g <= g)
                    continue;
                const double hc = h_(child, goal_);
                if (hc == kInf)
                    continue;
                if (it != best_.end())
                    open.erase(it->second);
                add(std::move(child), n, std::move(a), g, g + hc, open);
            }
        }
        if (!res.stats.found_goal && !stopped) {
            // Open list exhausted: the goal is unreachable, there is nothing to head for.
            res.plan.complete = false;
            return res;
        }
        res.plan = path(last);
        res.plan.complete = res.stats.found_goal;
        return res;
    }

    const std::vector<Node>& nodes() const { return nodes_; }

private:
    template <class Open>
    void add(State s, std::uint32_t parent, pddl::GroundAction a, std::uint32_t g, double f, Open& open)
    {
        const auto idx = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(Node{s, parent, std::move(a), g, f, counter_++});
        best_[std::move(s)] = idx;
        open.push(idx);
    }

    PartialPlan path(std::uint32_t n) const
    {
        PartialPlan p;
        while (nodes_[n].parent != kNoParent) {
            const Node& nd = nodes_[n];
            p.steps.push_back({nodes_[nd.parent].state, nd.action});
            n = nd.parent;
        }
        std::reverse(p.steps.begin(), p.steps.end());
        return p;
    }

    const pddl::Problem& pb_;
    const pddl::GoalSpec& goal_;
    const Heuristic& h_;
    std::vector<Node> nodes_;
    std::unordered_map<State, std::uint32_t, pddl::StateHash> best_;
    std::uint64_t counter_ = 0;

    friend struct HeapOpen;
    friend struct SoftmaxOpen;
};

/// Binary heap on (f, insertion order) with lazy deletion.
struct HeapOpen
{
    const std::vector<Node>* nodes;
    using Entry = std::tuple<double, std::uint64_t, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::vector<bool> dead;

    void push(std::uint32_t i)
    {
        if (dead.size() <= i)
            dead.resize(i + 1, false);
        heap.push({(*nodes)[i].f, (*nodes)[i].order, i});
    }
    void erase(std::uint32_t i) { dead[i] = true; }
    bool empty()
    {
        while (!heap.empty() && dead[std::get<2>(heap.top())])
            heap.pop();
        return heap.empty();
    }
    std::uint32_t pop()
    {
        empty();
        auto i = std::get<2>(heap.top());
        heap.pop();
        return i;
    }
};

/// Flat open list sampled by a softmax of -f/gamma.
struct SoftmaxOpen
{
    const std::vector<Node>* nodes;
    double gamma;
    Rng* rng;
    std::vector<std::uint32_t> items;
    std::vector<std::int64_t> pos;
    std::vector<double> w;

    void push(std::uint32_t i)
    {
        if (pos.size() <= i)
            pos.resize(i + 1, -1);
        pos[i] = static_cast<std::int64_t>(items.size());
        items.push_back(i);
    }
    void erase(std::uint32_t i)
    {
        if (i >= pos.size() || pos[i] < 0)
            return;
        remove_at(static_cast<std::size_t>(pos[i]));
    }
    bool empty() const { return items.empty(); }
    std::uint32_t pop()
    {
        std::size_t k = 0;
        if (gamma < kMinGamma) {
            for (std::size_t j = 1; j < items.size(); ++j) {
                const Node& a = (*nodes)[items[j]];
                const Node& b = (*nodes)[items[k]];
                if (a.f < b.f || (a.f == b.f && a.order < b.order))
                    k = j;
            }
        } else {
            double fmin = kInf;
            for (auto i : items)
                fmin = std::min(fmin, (*nodes)[i].f);
            w.resize(items.size());
            double total = 0;
            for (std::size_t j = 0; j < items.size(); ++j) {
                w[j] = std::exp(-((*nodes)[items[j]].f - fmin) / gamma);
                total += w[j];
            }
            double u = uniform01(*rng) * total;
            k = items.size() - 1;
            for (std::size_t j = 0; j < items.size(); ++j) {
                if (u < w[j]) {
                    k = j;
                    break;
                }
                u -= w[j];
            }
        }
        const std::uint32_t i = items[k];
        remove_at(k);
        return i;
    }
    void remove_at(std::size_t k)
    {
        pos[items[k]] = -1;
        if (k + 1 != items.size()) {
            items[k] = items.back();
            pos[items[k]] = static_cast<std::int64_t>(k);
        }
        items.pop_back();
    }
};

}  // namespace

SearchResult astar(const pddl::Problem& pb, const State& s0, const pddl::GoalSpec& g, const Heuristic& h,
                   std::optional<std::size_t> budget)
{
    Search search(pb, g, h);
    HeapOpen open{&search.nodes(), {}, {}};
    return search.run(s0, budget, open);
}

SearchResult probabilistic_astar(const pddl::Problem& pb, const State& s0, const pddl::GoalSpec& g,
                                 const Heuristic& h, double gamma, std::optional<std::size_t> eta, Rng& rng)
{
    Search search(pb, g, h);
    SoftmaxOpen open{&search.nodes(), gamma, &rng, {}, {}, {}};
    return search.run(s0, eta, open);
}

std::vector<double> selection_probabilities(std::span<const double> f, double gamma)
{
    std::vector<double> p(f.size(), 0.0);
    if (f.empty())
        return p;
    if (gamma < kMinGamma) {
        p[static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin())] = 1.0;
        return p;
    }
    std::vector<double> logits(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        logits[i] = -f[i] / gamma;
    return softmax(logits);
}

}  // namespace goalinf::planner
