#include "goalinf/pddl/semantics.hpp"

#include "goalinf/pddl/sexpr.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace goalinf::pddl {

PreconditionError::PreconditionError(const std::string& action, const std::string& literal)
    : std::runtime_error("precondition of " + action + " violated: " + literal), literal_(literal)
{
}

ObjectId resolve(const Term& t, std::span<const ObjectId> binding)
{
    return t.is_variable() ? binding[t.index] : t.index;
}

namespace {

template <std::size_t N>
struct ArgBuffer
{
    ObjectId data[N];
    std::size_t n = 0;
    std::span<const ObjectId> span() const { return {data, n}; }
};

std::int64_t fluent_value(const Problem& pb, std::uint32_t fluent, const std::vector<Term>& terms,
                          const State& s, std::span<const ObjectId> binding)
{
    ArgBuffer<8> args;
    if (terms.size() > 8)
        throw std::logic_error("fluent arity above 8 is unsupported");
    for (const auto& t : terms)
        args.data[args.n++] = resolve(t, binding);
    auto sl = pb.fluent_slot(fluent, args.span());
    if (!sl)
        throw std::logic_error("fluent " + pb.domain().fluents[fluent].name + " applied to mistyped arguments");
    return sl->rigid ? pb.rigid_fluent(sl->index) : s.fluents[sl->index];
}

bool atom_value(const Problem& pb, std::uint32_t predicate, const std::vector<Term>& terms,
                const State& s, std::span<const ObjectId> binding)
{
    ArgBuffer<8> args;
    if (terms.size() > 8)
        throw std::logic_error("predicate arity above 8 is unsupported");
    for (const auto& t : terms)
        args.data[args.n++] = resolve(t, binding);
    auto sl = pb.atom_slot(predicate, args.span());
    if (!sl)
        return false;
    return sl->rigid ? pb.rigid_atom(sl->index) : s.test(sl->index);
}

}  // namespace

std::int64_t evaluate(const Problem& pb, const NumExpr& e, const State& s, std::span<const ObjectId> binding)
{
    switch (e.op) {
    case NumExpr::Op::Constant: return e.value;
    case NumExpr::Op::Fluent: return fluent_value(pb, e.fluent, e.args, s, binding);
    case NumExpr::Op::Add: return evaluate(pb, e.operands[0], s, binding) + evaluate(pb, e.operands[1], s, binding);
    case NumExpr::Op::Sub: return evaluate(pb, e.operands[0], s, binding) - evaluate(pb, e.operands[1], s, binding);
    case NumExpr::Op::Mul: return evaluate(pb, e.operands[0], s, binding) * evaluate(pb, e.operands[1], s, binding);
    case NumExpr::Op::Neg: return -evaluate(pb, e.operands[0], s, binding);
    case NumExpr::Op::Abs: return std::llabs(evaluate(pb, e.operands[0], s, binding));
    }
    return 0;
}

bool holds(const Problem& pb, const Literal& lit, const State& s, std::span<const ObjectId> binding)
{
    bool v = false;
    switch (lit.kind) {
    case Literal::Kind::Atom: v = atom_value(pb, lit.predicate, lit.args, s, binding); break;
    case Literal::Kind::Equality: v = resolve(lit.args[0], binding) == resolve(lit.args[1], binding); break;
    case Literal::Kind::Compare: {
        const auto a = evaluate(pb, lit.lhs, s, binding);
        const auto b = evaluate(pb, lit.rhs, s, binding);
        switch (lit.cmp) {
        case Comparison::Eq: v = a == b; break;
        case Comparison::Lt: v = a < b; break;
        case Comparison::Le: v = a <= b; break;
        case Comparison::Gt: v = a > b; break;
        case Comparison::Ge: v = a >= b; break;
        }
        break;
    }
    }
    return v != lit.negated;
}

namespace {

std::int64_t run_program(const CompiledInstr* first, const CompiledInstr* last, const State& s)
{
    using Op = CompiledInstr::Op;
    std::int64_t small[16] = {};
    std::vector<std::int64_t> big;
    std::int64_t* stack = small;
    if (last - first > 16) {
        big.resize(static_cast<std::size_t>(last - first));
        stack = big.data();
    }
    std::size_t top = 0;
    for (const CompiledInstr* i = first; i != last; ++i) {
        switch (i->op) {
        case Op::Const: stack[top++] = i->value; break;
        case Op::Fluent: stack[top++] = s.fluents[static_cast<std::size_t>(i->value)]; break;
        case Op::Add: --top; stack[top - 1] += stack[top]; break;
        case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
        case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
        case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
        case Op::Abs: stack[top - 1] = std::llabs(stack[top - 1]); break;
        }
    }
    return stack[0];
}

}  // namespace

bool compiled_holds(const CompiledLiteral& c, const CompiledInstr* program, const State& s)
{
    switch (c.kind) {
    case CompiledLiteral::Kind::Constant: return c.value;
    case CompiledLiteral::Kind::Atom: return s.test(c.atom) != c.negated;
    case CompiledLiteral::Kind::Mistyped: throw std::logic_error("fluent applied to mistyped arguments");
    case CompiledLiteral::Kind::Linear:
    case CompiledLiteral::Kind::Compare: break;
    }
    std::int64_t a = 0, b = 0;
    if (c.kind == CompiledLiteral::Kind::Linear) {
        a = c.offset + c.k0 * s.fluents[c.slot0] + c.k1 * s.fluents[c.slot1];
    } else {
        a = run_program(program + c.lhs, program + c.mid, s);
        b = run_program(program + c.mid, program + c.end, s);
    }
    bool v = false;
    switch (c.cmp) {
    case Comparison::Eq: v = a == b; break;
    case Comparison::Lt: v = a < b; break;
    case Comparison::Le: v = a <= b; break;
    case Comparison::Gt: v = a > b; break;
    case Comparison::Ge: v = a >= b; break;
    }
    return v != c.negated;
}

std::vector<GroundAction> available_actions(const Problem& pb, const State& s)
{
    std::vector<GroundAction> out;
    const Domain& d = pb.domain();
    for (std::uint32_t oi : pb.operator_order()) {
        const Operator& op = d.operators[oi];
        const auto& tuples = pb.candidate_tuples(oi);
        const CompiledInstr* program = pb.compiled_program(oi).data();
        const std::size_t arity = op.params.size();
        const std::size_t count = pb.candidate_count(oi);
        for (std::size_t k = 0; k < count; ++k) {
            bool ok = true;
            for (const auto& c : pb.compiled_preconditions(oi, k)) {
                if (c.kind == CompiledLiteral::Kind::Mistyped) {
                    // Reproduce the uncompiled error text.
                    std::span<const ObjectId> binding(tuples.data() + k * arity, arity);
                    holds(pb, op.precondition[c.literal], s, binding);
                }
                if (!compiled_holds(c, program, s)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                const ObjectId* b = tuples.data() + k * arity;
                out.push_back(GroundAction{oi, {b, b + arity}});
            }
        }
    }
    return out;
}

bool is_applicable(const Problem& pb, const State& s, const GroundAction& a)
{
    if (a.is_noop())
        return true;
    const Operator& op = pb.domain().operators.at(a.op);
    if (a.args.size() != op.params.size())
        return false;
    const Domain& d = pb.domain();
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (a.args[i] >= pb.object_count() || !d.is_subtype(pb.object_type(a.args[i]), op.params[i].type))
            return false;
    return std::all_of(op.precondition.begin(), op.precondition.end(),
                       [&](const Literal& l) { return holds(pb, l, s, a.args); });
}

State apply(const Problem& pb, const State& s, const GroundAction& a)
{
    if (a.is_noop())
        return s;
    const Operator& op = pb.domain().operators.at(a.op);
    if (a.args.size() != op.params.size())
        throw std::invalid_argument("wrong argument count for " + op.name);
    for (const auto& l : op.precondition)
        if (!holds(pb, l, s, a.args))
            throw PreconditionError(action_to_string(pb, a), literal_to_string(pb, l, a.args));

    State next = s;
    auto atom_index = [&](const AtomTemplate& t) {
        std::vector<ObjectId> args;
        args.reserve(t.args.size());
        for (const auto& term : t.args)
            args.push_back(resolve(term, a.args));
        auto sl = pb.atom_slot(t.predicate, args);
        if (!sl || sl->rigid)
            throw std::logic_error("effect on non-dynamic atom in " + op.name);
        return sl->index;
    };
    for (const auto& del : op.del_effects)
        next.set(atom_index(del), false);
    for (const auto& add : op.add_effects)
        next.set(atom_index(add), true);
    for (const auto& u : op.fluent_effects) {
        std::vector<ObjectId> args;
        for (const auto& term : u.args)
            args.push_back(resolve(term, a.args));
        auto sl = pb.fluent_slot(u.fluent, args);
        if (!sl || sl->rigid)
            throw std::logic_error("effect on non-dynamic fluent in " + op.name);
        const auto v = evaluate(pb, u.value, s, a.args);
        auto& dst = next.fluents[sl->index];
        switch (u.kind) {
        case FluentUpdate::Kind::Assign: dst = v; break;
        case FluentUpdate::Kind::Increase: dst = s.fluents[sl->index] + v; break;
        case FluentUpdate::Kind::Decrease: dst = s.fluents[sl->index] - v; break;
        }
    }
    return next;
}

bool satisfies(const Problem& pb, const State& s, const GoalSpec& g)
{
    return std::all_of(g.literals.begin(), g.literals.end(),
                       [&](const Literal& l) { return holds(pb, l, s); });
}

std::string action_to_string(const Problem& pb, const GroundAction& a)
{
    if (a.is_noop())
        return "(noop)";
    std::string s = "(" + pb.domain().operators.at(a.op).name;
    for (auto o : a.args)
        s += " " + pb.object_name(o);
    return s + ")";
}

GroundAction parse_action(const Problem& pb, std::string_view text)
{
    SExpr e = read_sexpr(text);
    if (!e.is_list || e.items.empty() || !e.items[0].is_atom())
        throw std::invalid_argument("malformed action: " + std::string(text));
    if (e.items[0].atom == "noop" && e.size() == 1)
        return GroundAction::noop();
    auto op = pb.domain().find_operator(e.items[0].atom);
    if (!op)
        throw std::invalid_argument("unknown operator in action: " + std::string(text));
    GroundAction a{*op, {}};
    for (std::size_t i = 1; i < e.size(); ++i) {
        auto o = pb.find_object(e[i].atom);
        if (!o)
            throw std::invalid_argument("unknown object in action: " + e[i].atom);
        a.args.push_back(*o);
    }
    if (a.args.size() != pb.domain().operators[*op].params.size())
        throw std::invalid_argument("wrong arity in action: " + std::string(text));
    return a;
}

namespace {

std::string term_string(const Problem& pb, const Term& t, std::span<const ObjectId> binding,
                        const std::vector<TypedVar>* params)
{
    if (t.is_variable()) {
        if (t.index < binding.size())
            return pb.object_name(binding[t.index]);
        if (params)
            return (*params)[t.index].name;
        return "?" + std::to_string(t.index);
    }
    return pb.object_name(t.index);
}

std::string expr_string(const Problem& pb, const NumExpr& e, std::span<const ObjectId> binding)
{
    switch (e.op) {
    case NumExpr::Op::Constant: return std::to_string(e.value);
    case NumExpr::Op::Fluent: {
        std::string s = "(" + pb.domain().fluents[e.fluent].name;
        for (const auto& t : e.args)
            s += " " + term_string(pb, t, binding, nullptr);
        return s + ")";
    }
    case NumExpr::Op::Add: return "(+ " + expr_string(pb, e.operands[0], binding) + " " + expr_string(pb, e.operands[1], binding) + ")";
    case NumExpr::Op::Sub: return "(- " + expr_string(pb, e.operands[0], binding) + " " + expr_string(pb, e.operands[1], binding) + ")";
    case NumExpr::Op::Mul: return "(* " + expr_string(pb, e.operands[0], binding) + " " + expr_string(pb, e.operands[1], binding) + ")";
    case NumExpr::Op::Neg: return "(- " + expr_string(pb, e.operands[0], binding) + ")";
    case NumExpr::Op::Abs: return "(abs " + expr_string(pb, e.operands[0], binding) + ")";
    }
    return "?";
}

}  // namespace

std::string literal_to_string(const Problem& pb, const Literal& lit, std::span<const ObjectId> binding)
{
    std::string body;
    switch (lit.kind) {
    case Literal::Kind::Atom:
        body = "(" + pb.domain().predicates[lit.predicate].name;
        for (const auto& t : lit.args)
            body += " " + term_string(pb, t, binding, nullptr);
        body += ")";
        break;
    case Literal::Kind::Equality:
        body = "(= " + term_string(pb, lit.args[0], binding, nullptr) + " " +
               term_string(pb, lit.args[1], binding, nullptr) + ")";
        break;
    case Literal::Kind::Compare:
        body = "(" + std::string(to_string(lit.cmp)) + " " + expr_string(pb, lit.lhs, binding) + " " +
               expr_string(pb, lit.rhs, binding) + ")";
        break;
    }
    return lit.negated ? "(not " + body + ")" : body;
}

std::vector<std::string> fact_strings(const Problem& pb, const State& s)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < pb.dynamic_atom_count(); ++i)
        if (s.test(i))
            out.push_back(pb.dynamic_atom_name(i));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace goalinf::pddl
