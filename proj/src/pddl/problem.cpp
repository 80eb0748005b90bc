#include "goalinf/pddl/problem.hpp"

#include "goalinf/pddl/semantics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace goalinf::pddl {

std::size_t State::hash() const
{
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
    };
    for (auto w : bits)
        mix(w);
    for (auto f : fluents)
        mix(static_cast<std::uint64_t>(f));
    return static_cast<std::size_t>(h);
}

Problem::Problem(std::shared_ptr<const Domain> domain, ProblemSpec spec)
    : domain_(std::move(domain)), spec_(std::move(spec))
{
    if (!domain_)
        throw std::invalid_argument("problem requires a domain");
    build_objects();
    build_layouts();
    build_init();
    build_groundings();
}

void Problem::build_objects()
{
    const Domain& d = *domain_;
    for (const auto& c : d.constants) {
        object_names_.push_back(c.name);
        object_types_.push_back(c.type);
    }
    for (const auto& o : spec_.objects) {
        object_names_.push_back(o.name);
        object_types_.push_back(o.type);
    }
    objects_of_type_.assign(d.types.size(), {});
    type_position_.assign(d.types.size(), std::vector<std::int32_t>(object_names_.size(), -1));
    for (TypeId t = 0; t < d.types.size(); ++t) {
        for (ObjectId o = 0; o < object_names_.size(); ++o) {
            if (d.is_subtype(object_types_[o], t)) {
                type_position_[t][o] = static_cast<std::int32_t>(objects_of_type_[t].size());
                objects_of_type_[t].push_back(o);
            }
        }
    }
}

void Problem::build_layouts()
{
    const Domain& d = *domain_;
    auto make = [&](const Signature& sig, bool rigid, std::size_t& dyn_off, std::size_t& rigid_off) {
        Layout lay;
        lay.rigid = rigid;
        lay.size = 1;
        lay.strides.resize(sig.params.size());
        for (std::size_t i = sig.params.size(); i-- > 0;) {
            lay.strides[i] = lay.size;
            lay.size *= objects_of_type_[sig.params[i].type].size();
        }
        for (const auto& p : sig.params)
            lay.param_types.push_back(p.type);
        std::size_t& off = rigid ? rigid_off : dyn_off;
        lay.offset = off;
        off += lay.size;
        return lay;
    };
    for (std::uint32_t p = 0; p < d.predicates.size(); ++p)
        pred_layout_.push_back(make(d.predicates[p], d.predicate_is_static(p), dynamic_atoms_, rigid_atoms_));
    for (std::uint32_t f = 0; f < d.fluents.size(); ++f)
        fluent_layout_.push_back(make(d.fluents[f], d.fluent_is_static(f), dynamic_fluents_, rigid_fluent_count_));
}

State Problem::make_empty_state() const
{
    State s;
    s.bits.assign((dynamic_atoms_ + 63) / 64, 0);
    s.fluents.assign(dynamic_fluents_, 0);
    return s;
}

void Problem::build_init()
{
    init_ = make_empty_state();
    rigid_bits_.assign(rigid_atoms_, false);
    rigid_fluents_.assign(rigid_fluent_count_, 0);
    for (const auto& a : spec_.init_atoms) {
        auto sl = atom_slot(a.predicate, a.args);
        if (!sl)
            throw std::invalid_argument("init atom has mistyped arguments: " + atom_to_string(a));
        if (sl->rigid)
            rigid_bits_[sl->index] = true;
        else
            init_.set(sl->index, true);
    }
    for (const auto& f : spec_.init_fluents) {
        auto sl = fluent_slot(f.fluent, f.args);
        if (!sl)
            throw std::invalid_argument("init fluent has mistyped arguments");
        if (sl->rigid)
            rigid_fluents_[sl->index] = f.value;
        else
            init_.fluents[sl->index] = f.value;
    }
}

namespace {

std::int32_t max_var(const NumExpr& e)
{
    std::int32_t m = -1;
    for (const auto& t : e.args)
        if (t.is_variable())
            m = std::max(m, static_cast<std::int32_t>(t.index));
    for (const auto& c : e.operands)
        m = std::max(m, max_var(c));
    return m;
}

std::int32_t max_var(const Literal& l)
{
    std::int32_t m = -1;
    for (const auto& t : l.args)
        if (t.is_variable())
            m = std::max(m, static_cast<std::int32_t>(t.index));
    if (l.kind == Literal::Kind::Compare)
        m = std::max({m, max_var(l.lhs), max_var(l.rhs)});
    return m;
}

bool expr_is_rigid(const Problem& pb, const NumExpr& e)
{
    if (e.op == NumExpr::Op::Fluent && !pb.fluent_is_static(e.fluent))
        return false;
    return std::all_of(e.operands.begin(), e.operands.end(),
                       [&](const NumExpr& c) { return expr_is_rigid(pb, c); });
}

bool literal_is_rigid(const Problem& pb, const Literal& l)
{
    switch (l.kind) {
    case Literal::Kind::Atom: return pb.predicate_is_static(l.predicate);
    case Literal::Kind::Equality: return true;
    case Literal::Kind::Compare: return expr_is_rigid(pb, l.lhs) && expr_is_rigid(pb, l.rhs);
    }
    return false;
}

}  // namespace

void Problem::build_groundings()
{
    const Domain& d = *domain_;
    op_order_.resize(d.operators.size());
    std::iota(op_order_.begin(), op_order_.end(), 0u);
    std::stable_sort(op_order_.begin(), op_order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        return d.operators[a].name < d.operators[b].name;
    });

    grounding_.resize(d.operators.size());
    for (std::uint32_t oi = 0; oi < d.operators.size(); ++oi) {
        const Operator& op = d.operators[oi];
        const std::size_t arity = op.params.size();
        // Rigid literals bucketed by the depth at which they become checkable.
        std::vector<std::vector<std::uint32_t>> rigid_at(arity + 1);
        for (std::uint32_t li = 0; li < op.precondition.size(); ++li) {
            const Literal& l = op.precondition[li];
            if (literal_is_rigid(*this, l))
                rigid_at[static_cast<std::size_t>(max_var(l) + 1)].push_back(li);
            else
                grounding_[oi].dynamic_literals.push_back(li);
        }
        auto& out = grounding_[oi].tuples;
        std::vector<ObjectId> binding(arity);
        auto rigid_ok = [&](std::size_t depth) {
            for (auto li : rigid_at[depth])
                if (!holds(*this, op.precondition[li], init_, binding))
                    return false;
            return true;
        };
        auto recurse = [&](auto&& self, std::size_t depth) -> void {
            if (!rigid_ok(depth))
                return;
            if (depth == arity) {
                out.insert(out.end(), binding.begin(), binding.end());
                ++grounding_[oi].count;
                return;
            }
            for (ObjectId o : objects_of_type_[op.params[depth].type]) {
                binding[depth] = o;
                self(self, depth + 1);
            }
        };
        recurse(recurse, 0);
        compile_preconditions(oi);
    }
}

bool Problem::compile_expr(const NumExpr& e, std::span<const ObjectId> binding, std::vector<CompiledInstr>& prog) const
{
    using Op = CompiledInstr::Op;
    switch (e.op) {
    case NumExpr::Op::Constant: prog.push_back({Op::Const, e.value}); return true;
    case NumExpr::Op::Fluent: {
        std::vector<ObjectId> args;
        for (const auto& t : e.args)
            args.push_back(resolve(t, binding));
        auto sl = fluent_slot(e.fluent, args);
        if (!sl)
            return false;
        if (sl->rigid)
            prog.push_back({Op::Const, rigid_fluents_[sl->index]});
        else
            prog.push_back({Op::Fluent, static_cast<std::int64_t>(sl->index)});
        return true;
    }
    case NumExpr::Op::Neg:
    case NumExpr::Op::Abs:
        if (!compile_expr(e.operands[0], binding, prog))
            return false;
        prog.push_back({e.op == NumExpr::Op::Neg ? Op::Neg : Op::Abs, 0});
        return true;
    case NumExpr::Op::Add:
    case NumExpr::Op::Sub:
    case NumExpr::Op::Mul:
        if (!compile_expr(e.operands[0], binding, prog) || !compile_expr(e.operands[1], binding, prog))
            return false;
        prog.push_back({e.op == NumExpr::Op::Add ? Op::Add : e.op == NumExpr::Op::Sub ? Op::Sub : Op::Mul, 0});
        return true;
    }
    return false;
}

namespace {

/// Linear form of a compiled program, if it has one.
bool linearize(const CompiledInstr* first, const CompiledInstr* last, std::int64_t sign,
               std::map<std::int64_t, std::int64_t>& terms, std::int64_t& offset)
{
    using Op = CompiledInstr::Op;
    struct Lin
    {
        std::map<std::int64_t, std::int64_t> terms;
        std::int64_t c = 0;
    };
    std::vector<Lin> st;
    for (auto* i = first; i != last; ++i) {
        switch (i->op) {
        case Op::Const: st.push_back({{}, i->value}); break;
        case Op::Fluent: st.push_back({{{i->value, 1}}, 0}); break;
        case Op::Neg:
            for (auto& [k, v] : st.back().terms)
                v = -v;
            st.back().c = -st.back().c;
            break;
        case Op::Abs:
            if (!st.back().terms.empty())
                return false;
            st.back().c = std::llabs(st.back().c);
            break;
        case Op::Add:
        case Op::Sub: {
            Lin b = std::move(st.back());
            st.pop_back();
            const std::int64_t m = i->op == Op::Add ? 1 : -1;
            for (auto& [k, v] : b.terms)
                st.back().terms[k] += m * v;
            st.back().c += m * b.c;
            break;
        }
        case Op::Mul: {
            Lin b = std::move(st.back());
            st.pop_back();
            Lin& a = st.back();
            if (!a.terms.empty() && !b.terms.empty())
                return false;
            if (a.terms.empty())
                std::swap(a, b);
            for (auto& [k, v] : a.terms)
                v *= b.c;
            a.c *= b.c;
            break;
        }
        }
    }
    for (auto& [k, v] : st.back().terms)
        terms[k] += sign * v;
    offset += sign * st.back().c;
    return true;
}

}  // namespace

void Problem::compile_preconditions(std::uint32_t oi)
{
    auto& gr = grounding_[oi];
    const Operator& op = domain_->operators[oi];
    const std::size_t arity = op.params.size();
    gr.compiled_begin.assign(1, 0);
    const State empty = make_empty_state();
    for (std::size_t k = 0; k < gr.count; ++k) {
        std::span<const ObjectId> binding(gr.tuples.data() + k * arity, arity);
        for (auto li : gr.dynamic_literals) {
            const Literal& l = op.precondition[li];
            CompiledLiteral c;
            c.negated = l.negated;
            c.literal = li;
            if (l.kind == Literal::Kind::Equality) {
                c.value = (resolve(l.args[0], binding) == resolve(l.args[1], binding)) != l.negated;
            } else if (l.kind == Literal::Kind::Atom) {
                std::vector<ObjectId> args;
                for (const auto& t : l.args)
                    args.push_back(resolve(t, binding));
                auto sl = atom_slot(l.predicate, args);
                if (!sl)
                    c.value = l.negated;
                else if (sl->rigid)
                    c.value = rigid_bits_[sl->index] != l.negated;
                else {
                    c.kind = CompiledLiteral::Kind::Atom;
                    c.atom = sl->index;
                }
            } else {
                const auto start = gr.program.size();
                c.cmp = l.cmp;
                c.lhs = static_cast<std::uint32_t>(start);
                bool ok = compile_expr(l.lhs, binding, gr.program);
                c.mid = static_cast<std::uint32_t>(gr.program.size());
                ok = ok && compile_expr(l.rhs, binding, gr.program);
                c.end = static_cast<std::uint32_t>(gr.program.size());
                if (!ok) {
                    gr.program.resize(start);
                    c.kind = CompiledLiteral::Kind::Mistyped;
                } else {
                    c.kind = CompiledLiteral::Kind::Compare;
                    const bool constant =
                        std::none_of(gr.program.begin() + static_cast<std::ptrdiff_t>(start), gr.program.end(),
                                     [](const CompiledInstr& i) { return i.op == CompiledInstr::Op::Fluent; });
                    std::map<std::int64_t, std::int64_t> terms;
                    std::int64_t offset = 0;
                    if (constant) {
                        c.value = compiled_holds(c, gr.program.data(), empty);
                        c.kind = CompiledLiteral::Kind::Constant;
                        gr.program.resize(start);
                    } else if (linearize(gr.program.data() + c.lhs, gr.program.data() + c.mid, 1, terms, offset) &&
                               linearize(gr.program.data() + c.mid, gr.program.data() + c.end, -1, terms, offset) &&
                               terms.size() <= 2) {
                        c.kind = CompiledLiteral::Kind::Linear;
                        c.offset = offset;
                        auto it = terms.begin();
                        if (it != terms.end()) {
                            c.slot0 = static_cast<std::uint32_t>(it->first);
                            c.k0 = it->second;
                            ++it;
                        }
                        if (it != terms.end()) {
                            c.slot1 = static_cast<std::uint32_t>(it->first);
                            c.k1 = it->second;
                        }
                        gr.program.resize(start);
                    }
                }
            }
            if (c.kind == CompiledLiteral::Kind::Constant && c.value)
                continue;
            gr.compiled.push_back(c);
        }
        gr.compiled_begin.push_back(gr.compiled.size());
    }
}

std::optional<ObjectId> Problem::find_object(std::string_view name) const
{
    auto it = std::find(object_names_.begin(), object_names_.end(), name);
    if (it == object_names_.end())
        return std::nullopt;
    return static_cast<ObjectId>(it - object_names_.begin());
}

std::optional<std::size_t> Problem::find_goal(std::string_view label) const
{
    for (std::size_t i = 0; i < spec_.goals.size(); ++i)
        if (spec_.goals[i].label == label)
            return i;
    return std::nullopt;
}

std::optional<Problem::AtomSlot> Problem::slot(const Layout& lay, std::span<const ObjectId> args) const
{
    if (args.size() != lay.param_types.size())
        return std::nullopt;
    std::size_t idx = lay.offset;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] >= object_names_.size())
            return std::nullopt;
        const std::int32_t pos = type_position_[lay.param_types[i]][args[i]];
        if (pos < 0)
            return std::nullopt;
        idx += static_cast<std::size_t>(pos) * lay.strides[i];
    }
    return AtomSlot{lay.rigid, idx};
}

std::optional<Problem::AtomSlot> Problem::atom_slot(std::uint32_t predicate, std::span<const ObjectId> args) const
{
    return slot(pred_layout_.at(predicate), args);
}

std::optional<Problem::AtomSlot> Problem::fluent_slot(std::uint32_t fluent, std::span<const ObjectId> args) const
{
    return slot(fluent_layout_.at(fluent), args);
}

GroundAtom Problem::decode(const std::vector<Layout>& layouts, std::size_t index, bool rigid) const
{
    for (std::uint32_t p = 0; p < layouts.size(); ++p) {
        const Layout& lay = layouts[p];
        if (lay.rigid != rigid || index < lay.offset || index >= lay.offset + lay.size)
            continue;
        GroundAtom a;
        a.predicate = p;
        std::size_t rem = index - lay.offset;
        for (std::size_t i = 0; i < lay.strides.size(); ++i) {
            const std::size_t pos = rem / lay.strides[i];
            rem %= lay.strides[i];
            a.args.push_back(objects_of_type_[lay.param_types[i]][pos]);
        }
        return a;
    }
    throw std::out_of_range("atom index out of range");
}

GroundAtom Problem::dynamic_atom(std::size_t index) const { return decode(pred_layout_, index, false); }
GroundAtom Problem::dynamic_fluent(std::size_t index) const { return decode(fluent_layout_, index, false); }

std::string Problem::atom_to_string(const GroundAtom& a) const
{
    std::string s = "(" + domain_->predicates.at(a.predicate).name;
    for (auto o : a.args)
        s += " " + object_names_.at(o);
    return s + ")";
}

std::string Problem::fluent_to_string(const GroundAtom& f) const
{
    std::string s = "(" + domain_->fluents.at(f.predicate).name;
    for (auto o : f.args)
        s += " " + object_names_.at(o);
    return s + ")";
}

}  // namespace goalinf::pddl
