#include "goalinf/baselines/birl.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace goalinf::baselines {

using pddl::State;

std::string_view to_string(ViMode m)
{
    switch (m) {
    case ViMode::Sync: return "sync";
    case ViMode::AsyncUniform: return "async_uniform";
    case ViMode::AsyncOracle: return "async_oracle";
    }
    return "?";
}

void ViConfig::validate() const
{
    if (iters < 1)
        throw std::invalid_argument("value iteration needs at least one iteration");
    if (!(discount > 0 && discount < 1))
        throw std::invalid_argument("discount must lie in (0, 1)");
    if (mode == ViMode::AsyncUniform && !sampler)
        throw std::invalid_argument("async_uniform value iteration needs a state sampler");
    if (mode == ViMode::AsyncOracle && oracle_states.empty())
        throw std::invalid_argument("async_oracle value iteration needs oracle states");
}

const QFunction::Entry* QFunction::find(const State& s) const
{
    auto it = table_.find(s);
    return it == table_.end() ? nullptr : &it->second;
}

double QFunction::q(const State& s, const pddl::GroundAction& a) const
{
    const Entry* e = find(s);
    if (!e)
        return 0;
    const auto avail = pddl::available_actions(*pb_, s);
    auto it = std::find(avail.begin(), avail.end(), a);
    return it == avail.end() ? 0 : e->q[static_cast<std::size_t>(it - avail.begin())];
}

double QFunction::value(const State& s) const
{
    const Entry* e = find(s);
    if (!e || e->q.empty())
        return 0;
    return *std::max_element(e->q.begin(), e->q.end());
}

std::vector<State> reachable_states(const pddl::Problem& pb, const State& s0, std::size_t bound)
{
    std::vector<State> out{s0};
    std::unordered_set<State, pddl::StateHash> seen{s0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& a : pddl::available_actions(pb, out[i])) {
            State n = pddl::apply(pb, out[i], a);
            if (seen.insert(n).second) {
                if (out.size() >= bound)
                    throw std::length_error("reachable state space exceeds " + std::to_string(bound) + " states");
                out.push_back(std::move(n));
            }
        }
    }
    return out;
}

namespace {

std::vector<State> successors(const pddl::Problem& pb, const State& s)
{
    std::vector<State> out;
    for (const auto& a : pddl::available_actions(pb, s))
        out.push_back(pddl::apply(pb, s, a));
    return out;
}

}  // namespace

QFunction value_iteration(const pddl::Problem& pb, const pddl::GoalSpec& g, const ViConfig& cfg, Rng& rng)
{
    cfg.validate();
    QFunction qf(pb, cfg.mode, cfg.discount);
    const double gamma = cfg.discount;
    auto is_goal = [&](const State& s) { return pddl::satisfies(pb, s, g); };

    if (cfg.mode == ViMode::Sync) {
        const auto states = reachable_states(pb, pb.initial_state(), cfg.state_bound);
        std::unordered_map<State, std::size_t, pddl::StateHash> index;
        for (std::size_t i = 0; i < states.size(); ++i)
            index.emplace(states[i], i);
        struct Row
        {
            QFunction::Entry* entry;
            std::vector<std::int64_t> next;  // -1: goal state
            std::vector<double> reward;
        };
        std::vector<Row> rows;
        std::vector<std::int64_t> row_of(states.size(), -1);
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (is_goal(states[i]))
                continue;
            const auto next = successors(pb, states[i]);
            auto& e = qf.table_[states[i]];
            e.q.assign(next.size(), 0.0);
            Row r{&e, {}, {}};
            for (const auto& n : next) {
                const bool goal = is_goal(n);
                r.next.push_back(goal ? -1 : static_cast<std::int64_t>(index.at(n)));
                r.reward.push_back(goal ? 1.0 : 0.0);
            }
            row_of[i] = static_cast<std::int64_t>(rows.size());
            rows.push_back(std::move(r));
        }
        std::vector<double> v(states.size(), 0.0);
        for (std::size_t it = 0; it < cfg.iters; ++it) {
            double resid = 0;
            for (auto& r : rows) {
                for (std::size_t k = 0; k < r.next.size(); ++k) {
                    const double vn = r.next[k] < 0 ? 0.0 : v[static_cast<std::size_t>(r.next[k])];
                    const double nq = r.reward[k] + gamma * vn;
                    resid = std::max(resid, std::abs(nq - r.entry->q[k]));
                    r.entry->q[k] = nq;
                }
            }
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (row_of[i] < 0)
                    continue;
                const auto& q = rows[static_cast<std::size_t>(row_of[i])].entry->q;
                v[i] = q.empty() ? 0.0 : *std::max_element(q.begin(), q.end());
            }
            ++qf.iterations_;
            qf.state_updates_ += rows.size();
            qf.residuals_.push_back(resid);
            if (resid == 0)
                break;
        }
        return qf;
    }

    std::uniform_int_distribution<std::size_t> pick(0, cfg.oracle_states.empty() ? 0 : cfg.oracle_states.size() - 1);
    for (std::size_t it = 0; it < cfg.iters; ++it) {
        const State s = cfg.mode == ViMode::AsyncUniform ? cfg.sampler(rng) : cfg.oracle_states[pick(rng)];
        ++qf.iterations_;
        ++qf.state_updates_;
        if (is_goal(s))
            continue;
        const auto next = successors(pb, s);
        std::vector<double> q(next.size());
        for (std::size_t k = 0; k < next.size(); ++k)
            q[k] = is_goal(next[k]) ? 1.0 : gamma * qf.value(next[k]);
        qf.table_[s].q = std::move(q);
    }
    return qf;
}

std::vector<PosteriorSnapshot> birl_posteriors(const pddl::Problem& pb, std::span<const State> states,
                                               std::span<const pddl::GroundAction> actions,
                                               std::span<const QFunction> qfns, double alpha)
{
    if (qfns.size() != pb.goals().size())
        throw std::invalid_argument("birl_posteriors needs one Q-function per goal");
    // N is reported per goal, like the iteration budget it derives from.
    std::size_t visits = 0;
    for (const auto& q : qfns)
        visits += q.state_updates();
    visits /= std::max<std::size_t>(1, qfns.size());
    std::vector<double> logp(qfns.size(), 0.0);
    std::vector<PosteriorSnapshot> out;
    for (std::size_t t = 1; t <= states.size(); ++t) {
        if (t >= 2 && t - 2 < actions.size()) {
            const State& s = states[t - 2];
            const auto& a = actions[t - 2];
            const auto avail = pddl::available_actions(pb, s);
            auto it = std::find(avail.begin(), avail.end(), a);
            if (!a.is_noop() && it != avail.end()) {
                const auto idx = static_cast<std::size_t>(it - avail.begin());
                std::vector<double> logits(avail.size());
                for (std::size_t g = 0; g < qfns.size(); ++g) {
                    const auto* e = qfns[g].find(s);
                    for (std::size_t k = 0; k < avail.size(); ++k)
                        logits[k] = e ? alpha * e->q[k] : 0.0;
                    logp[g] += logits[idx] - log_sum_exp(logits);
                }
            }
        }
        PosteriorSnapshot snap;
        snap.t = t;
        snap.probs = normalize_log_weights(logp);
        snap.nodes_expanded = visits;
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace goalinf::baselines
