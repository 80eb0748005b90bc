#include "goalinf/planner/heuristic.hpp"

#include "goalinf/common/numeric.hpp"
#include "goalinf/pddl/semantics.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <stdexcept>

namespace goalinf::planner {

using pddl::GoalSpec;
using pddl::Literal;
using pddl::NumExpr;
using pddl::ObjectId;
using pddl::Problem;
using pddl::State;

std::string_view to_string(HeuristicKind k)
{
    switch (k) {
    case HeuristicKind::Manhattan: return "manhattan";
    case HeuristicKind::Maze: return "maze";
    case HeuristicKind::GoalCount: return "goal_count";
    case HeuristicKind::HAdd: return "hadd";
    }
    return "?";
}

std::optional<HeuristicKind> parse_heuristic_kind(std::string_view s)
{
    if (s == "manhattan")
        return HeuristicKind::Manhattan;
    if (s == "maze")
        return HeuristicKind::Maze;
    if (s == "goal_count" || s == "goal-count" || s == "gc")
        return HeuristicKind::GoalCount;
    if (s == "hadd" || s == "h_add")
        return HeuristicKind::HAdd;
    return std::nullopt;
}

namespace {

class GoalCountHeuristic final : public Heuristic
{
public:
    explicit GoalCountHeuristic(const Problem& pb) : pb_(pb) {}
    double evaluate(const State& s, const GoalSpec& g) const override
    {
        double n = 0;
        for (const auto& l : g.literals)
            if (!pddl::holds(pb_, l, s))
                n += 1;
        return n;
    }
    HeuristicKind kind() const override { return HeuristicKind::GoalCount; }

private:
    const Problem& pb_;
};

/// Shared target extraction for the Manhattan and maze heuristics.
class SpatialHeuristic : public Heuristic
{
public:
    SpatialHeuristic(const Problem& pb, const HeuristicConfig& cfg) : pb_(pb)
    {
        const auto& d = pb.domain();
        auto xf = d.find_fluent(cfg.x_fluent);
        auto yf = d.find_fluent(cfg.y_fluent);
        if (!xf || !yf || !d.fluents[*xf].params.empty() || !d.fluents[*yf].params.empty())
            throw std::invalid_argument("spatial heuristic needs 0-ary position fluents '" + cfg.x_fluent +
                                        "' and '" + cfg.y_fluent + "' in domain " + d.name);
        xpos_ = *pb.fluent_slot(*xf, {});
        ypos_ = *pb.fluent_slot(*yf, {});
        xf_ = *xf;
        yf_ = *yf;
        xloc_ = d.find_fluent(cfg.x_loc);
        yloc_ = d.find_fluent(cfg.y_loc);
    }

    double evaluate(const State& s, const GoalSpec& g) const override
    {
        const std::int64_t ax = value(xpos_, s);
        const std::int64_t ay = value(ypos_, s);
        double h = 0;
        std::optional<std::int64_t> tx, ty;
        bool pos_unsat = false;
        for (const auto& l : g.literals) {
            if (pddl::holds(pb_, l, s))
                continue;
            if (l.kind == Literal::Kind::Atom && !l.negated) {
                for (const auto& t : l.args) {
                    auto loc = location(t.index, s);
                    if (loc) {
                        h = std::max(h, distance(ax, ay, loc->first, loc->second));
                        break;
                    }
                }
            } else if (l.kind == Literal::Kind::Compare && !l.negated && l.cmp == pddl::Comparison::Eq) {
                if (is_fluent(l.lhs, xf_)) {
                    tx = pddl::evaluate(pb_, l.rhs, s);
                    pos_unsat = true;
                } else if (is_fluent(l.lhs, yf_)) {
                    ty = pddl::evaluate(pb_, l.rhs, s);
                    pos_unsat = true;
                }
            }
        }
        if (pos_unsat) {
            // A position goal may also have a satisfied half; recover it.
            for (const auto& l : g.literals) {
                if (l.kind != Literal::Kind::Compare || l.negated || l.cmp != pddl::Comparison::Eq)
                    continue;
                if (!tx && is_fluent(l.lhs, xf_))
                    tx = pddl::evaluate(pb_, l.rhs, s);
                if (!ty && is_fluent(l.lhs, yf_))
                    ty = pddl::evaluate(pb_, l.rhs, s);
            }
            if (tx && ty)
                h = std::max(h, distance(ax, ay, *tx, *ty));
            else
                h = std::max(h, static_cast<double>(tx ? std::llabs(*tx - ax) : std::llabs(*ty - ay)));
        }
        return h;
    }

protected:
    virtual double distance(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) const
    {
        return static_cast<double>(std::llabs(ax - bx) + std::llabs(ay - by));
    }

    const Problem& pb_;

private:
    std::int64_t value(const Problem::AtomSlot& sl, const State& s) const
    {
        return sl.rigid ? pb_.rigid_fluent(sl.index) : s.fluents[sl.index];
    }

    static bool is_fluent(const NumExpr& e, std::uint32_t f)
    {
        return e.op == NumExpr::Op::Fluent && e.fluent == f && e.args.empty();
    }

    std::optional<std::pair<std::int64_t, std::int64_t>> location(ObjectId o, const State& s) const
    {
        if (!xloc_ || !yloc_)
            return std::nullopt;
        const ObjectId args[1] = {o};
        auto sx = pb_.fluent_slot(*xloc_, args);
        auto sy = pb_.fluent_slot(*yloc_, args);
        if (!sx || !sy)
            return std::nullopt;
        return std::pair{value(*sx, s), value(*sy, s)};
    }

    Problem::AtomSlot xpos_, ypos_;
    std::uint32_t xf_ = 0, yf_ = 0;
    std::optional<std::uint32_t> xloc_, yloc_;
};

class ManhattanHeuristic final : public SpatialHeuristic
{
public:
    using SpatialHeuristic::SpatialHeuristic;
    HeuristicKind kind() const override { return HeuristicKind::Manhattan; }
};

/// Breadth-first distance over grid cells, ignoring doors.
class MazeHeuristic final : public SpatialHeuristic
{
public:
    MazeHeuristic(const Problem& pb, const HeuristicConfig& cfg) : SpatialHeuristic(pb, cfg)
    {
        const auto& d = pb.domain();
        auto cx = d.find_fluent(cfg.cell_x);
        auto cy = d.find_fluent(cfg.cell_y);
        if (!cx || !cy || d.fluents[*cx].params.size() != 1)
            throw std::invalid_argument("maze heuristic needs cell coordinate fluents '" + cfg.cell_x + "', '" +
                                        cfg.cell_y + "'");
        const auto& cells = pb.objects_of_type(d.fluents[*cx].params[0].type);
        for (ObjectId c : cells) {
            const ObjectId a[1] = {c};
            auto sx = pb.fluent_slot(*cx, a);
            auto sy = pb.fluent_slot(*cy, a);
            if (!sx || !sy || !sx->rigid || !sy->rigid)
                throw std::invalid_argument("maze heuristic needs static cell coordinates");
            index_[{pb.rigid_fluent(sx->index), pb.rigid_fluent(sy->index)}] = coords_.size();
            coords_.push_back({pb.rigid_fluent(sx->index), pb.rigid_fluent(sy->index)});
        }
        const std::size_t n = coords_.size();
        dist_.assign(n * n, kInf);
        for (std::size_t src = 0; src < n; ++src) {
            std::queue<std::size_t> q;
            dist_[src * n + src] = 0;
            q.push(src);
            while (!q.empty()) {
                const std::size_t u = q.front();
                q.pop();
                static constexpr int dx[4] = {1, -1, 0, 0};
                static constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    auto it = index_.find({coords_[u].first + dx[k], coords_[u].second + dy[k]});
                    if (it == index_.end() || dist_[src * n + it->second] != kInf)
                        continue;
                    dist_[src * n + it->second] = dist_[src * n + u] + 1;
                    q.push(it->second);
                }
            }
        }
    }
    HeuristicKind kind() const override { return HeuristicKind::Maze; }

protected:
    double distance(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) const override
    {
        auto a = index_.find({ax, ay});
        auto b = index_.find({bx, by});
        if (a == index_.end() || b == index_.end())
            return SpatialHeuristic::distance(ax, ay, bx, by);
        return dist_[a->second * coords_.size() + b->second];
    }

private:
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index_;
    std::vector<std::pair<std::int64_t, std::int64_t>> coords_;
    std::vector<double> dist_;
};

/// Additive delete-relaxation heuristic over positive dynamic atoms.
class HAddHeuristic final : public Heuristic
{
public:
    explicit HAddHeuristic(const Problem& pb) : pb_(pb)
    {
        const auto& d = pb.domain();
        achievers_of_pre_.resize(pb.dynamic_atom_count());
        for (std::uint32_t oi : pb.operator_order()) {
            const auto& op = d.operators[oi];
            const auto& tuples = pb.candidate_tuples(oi);
            const std::size_t arity = op.params.size();
            for (std::size_t k = 0; k < pb.candidate_count(oi); ++k) {
                std::span<const ObjectId> binding(tuples.data() + k * arity, arity);
                RelaxedAction ra;
                for (auto li : pb.dynamic_preconditions(oi)) {
                    const auto& l = op.precondition[li];
                    if (l.kind != Literal::Kind::Atom || l.negated)
                        continue;
                    auto idx = dynamic_index(l.predicate, l.args, binding);
                    if (idx)
                        ra.pre.push_back(*idx);
                }
                std::sort(ra.pre.begin(), ra.pre.end());
                ra.pre.erase(std::unique(ra.pre.begin(), ra.pre.end()), ra.pre.end());
                for (const auto& a : op.add_effects)
                    if (auto idx = dynamic_index(a.predicate, a.args, binding))
                        ra.add.push_back(*idx);
                const auto id = static_cast<std::uint32_t>(actions_.size());
                for (auto p : ra.pre)
                    achievers_of_pre_[p].push_back(id);
                actions_.push_back(std::move(ra));
            }
        }
    }

    double evaluate(const State& s, const GoalSpec& g) const override
    {
        std::vector<double> cost;
        bool need_relax = false;
        double extra = 0;
        for (const auto& l : g.literals) {
            if (pddl::holds(pb_, l, s))
                continue;
            if (l.kind == Literal::Kind::Atom && !l.negated) {
                std::vector<ObjectId> args;
                for (const auto& t : l.args)
                    args.push_back(t.index);
                auto sl = pb_.atom_slot(l.predicate, args);
                if (!sl || sl->rigid)
                    return kInf;
                need_relax = true;
            } else {
                extra += 1;
            }
        }
        if (!need_relax)
            return extra;
        relax(s, cost);
        double h = extra;
        for (const auto& l : g.literals) {
            if (l.kind != Literal::Kind::Atom || l.negated)
                continue;
            std::vector<ObjectId> args;
            for (const auto& t : l.args)
                args.push_back(t.index);
            auto sl = pb_.atom_slot(l.predicate, args);
            if (sl->rigid)
                continue;
            h += cost[sl->index];
        }
        return h;
    }
    HeuristicKind kind() const override { return HeuristicKind::HAdd; }

private:
    struct RelaxedAction
    {
        std::vector<std::uint32_t> pre;
        std::vector<std::uint32_t> add;
    };

    std::optional<std::uint32_t> dynamic_index(std::uint32_t pred, const std::vector<pddl::Term>& terms,
                                               std::span<const ObjectId> binding) const
    {
        std::vector<ObjectId> args;
        for (const auto& t : terms)
            args.push_back(pddl::resolve(t, binding));
        auto sl = pb_.atom_slot(pred, args);
        if (!sl || sl->rigid)
            return std::nullopt;
        return static_cast<std::uint32_t>(sl->index);
    }

    // Generalized Dijkstra over the AND/OR relaxed graph.
    void relax(const State& s, std::vector<double>& cost) const
    {
        const std::size_t n = pb_.dynamic_atom_count();
        cost.assign(n, kInf);
        std::vector<std::uint32_t> remaining(actions_.size());
        std::vector<double> sum(actions_.size(), 0.0);
        using Entry = std::pair<double, std::uint32_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
        std::vector<bool> done(n, false);
        auto fire = [&](std::uint32_t a) {
            const double c = 1.0 + sum[a];
            for (auto q : actions_[a].add)
                if (c < cost[q]) {
                    cost[q] = c;
                    pq.push({c, q});
                }
        };
        for (std::size_t i = 0; i < n; ++i)
            if (s.test(i)) {
                cost[i] = 0;
                pq.push({0.0, static_cast<std::uint32_t>(i)});
            }
        for (std::uint32_t a = 0; a < actions_.size(); ++a) {
            remaining[a] = static_cast<std::uint32_t>(actions_[a].pre.size());
            if (remaining[a] == 0)
                fire(a);
        }
        while (!pq.empty()) {
            auto [c, p] = pq.top();
            pq.pop();
            if (done[p] || c > cost[p])
                continue;
            done[p] = true;
            for (auto a : achievers_of_pre_[p]) {
                sum[a] += c;
                if (--remaining[a] == 0)
                    fire(a);
            }
        }
    }

    const Problem& pb_;
    std::vector<RelaxedAction> actions_;
    std::vector<std::vector<std::uint32_t>> achievers_of_pre_;
};

}  // namespace

HeuristicPtr make_heuristic(HeuristicKind kind, const Problem& problem, const HeuristicConfig& cfg)
{
    switch (kind) {
    case HeuristicKind::Manhattan: return std::make_shared<ManhattanHeuristic>(problem, cfg);
    case HeuristicKind::Maze: return std::make_shared<MazeHeuristic>(problem, cfg);
    case HeuristicKind::GoalCount: return std::make_shared<GoalCountHeuristic>(problem);
    case HeuristicKind::HAdd: return std::make_shared<HAddHeuristic>(problem);
    }
    throw std::invalid_argument("unknown heuristic kind");
}

}  // namespace goalinf::planner
