#pragma once

#include "goalinf/pddl/domain.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace goalinf::pddl {

struct ObjectDef
{
    std::string name;
    TypeId type = kRootType;
    bool operator==(const ObjectDef&) const = default;
};

struct GroundAtom
{
    std::uint32_t predicate = 0;
    std::vector<ObjectId> args;
    bool operator==(const GroundAtom&) const = default;
};

struct FluentInit
{
    std::uint32_t fluent = 0;
    std::vector<ObjectId> args;
    std::int64_t value = 0;
    bool operator==(const FluentInit&) const = default;
};

/// A candidate goal: a conjunction of fully ground literals.
struct GoalSpec
{
    std::string label;
    std::vector<Literal> literals;  // all terms are constants
    bool operator==(const GoalSpec&) const = default;
};

/// Problem text as parsed, before grounding indexes are built. Object ids in
/// this struct count the domain constants first, then `objects`.
struct ProblemSpec
{
    std::string name;
    std::string domain_name;
    std::vector<ObjectDef> objects;
    std::vector<GroundAtom> init_atoms;
    std::vector<FluentInit> init_fluents;
    std::vector<GoalSpec> goals;
    /// True when goals came from a single `(:goal ...)` section.
    bool single_goal_section = false;
    bool operator==(const ProblemSpec&) const = default;
};

/// Ground action. `op` indexes Domain::operators; kNoop marks the no-op.
struct GroundAction
{
    static constexpr std::uint32_t kNoop = 0xffffffffu;
    std::uint32_t op = kNoop;
    std::vector<ObjectId> args;

    static GroundAction noop() { return {}; }
    [[nodiscard]] bool is_noop() const { return op == kNoop; }
    bool operator==(const GroundAction&) const = default;
    auto operator<=>(const GroundAction&) const = default;
};

/// Dynamic part of a world state. Atoms and fluents that no operator can change
/// are rigid and live in the Problem; a State only holds the changeable
/// vocabulary, indexed densely by Problem::dynamic_atom_count()/dynamic_fluent_count().
struct State
{
    std::vector<std::uint64_t> bits;
    std::vector<std::int64_t> fluents;

    [[nodiscard]] bool test(std::size_t atom) const { return (bits[atom >> 6] >> (atom & 63)) & 1u; }
    void set(std::size_t atom, bool v)
    {
        const std::uint64_t mask = std::uint64_t{1} << (atom & 63);
        if (v)
            bits[atom >> 6] |= mask;
        else
            bits[atom >> 6] &= ~mask;
    }
    [[nodiscard]] std::size_t hash() const;
    bool operator==(const State&) const = default;
};

struct StateHash
{
    std::size_t operator()(const State& s) const { return s.hash(); }
};

/// Instruction of a postfix integer program. `value` holds the constant or
/// the dynamic fluent slot.
struct CompiledInstr
{
    enum class Op : std::uint8_t { Const, Fluent, Add, Sub, Mul, Neg, Abs };
    Op op = Op::Const;
    std::int64_t value = 0;
};

/// A dynamic precondition literal for one candidate tuple, with its
/// arguments resolved and rigid atoms and fluents folded into constants.
struct CompiledLiteral
{
    enum class Kind : std::uint8_t { Constant, Atom, Linear, Compare, Mistyped };
    Kind kind = Kind::Constant;
    bool negated = false;
    bool value = false;          // Constant
    std::size_t atom = 0;        // Atom: dynamic atom index
    Comparison cmp = Comparison::Eq;
    std::uint32_t lhs = 0, mid = 0, end = 0;  // Compare: program ranges [lhs, mid) and [mid, end)
    // Linear: offset + k0 * f[slot0] + k1 * f[slot1] compared against zero
    std::int64_t offset = 0, k0 = 0, k1 = 0;
    std::uint32_t slot0 = 0, slot1 = 0;
    std::uint32_t literal = 0;   // index into the operator's precondition
};

/// Grounded problem: parsed spec plus the typed-object, atom and fluent indexes
/// that all state operations use. Immutable after construction.
class Problem
{
public:
    Problem(std::shared_ptr<const Domain> domain, ProblemSpec spec);

    [[nodiscard]] const Domain& domain() const { return *domain_; }
    [[nodiscard]] const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
    [[nodiscard]] const ProblemSpec& spec() const { return spec_; }
    [[nodiscard]] const std::string& name() const { return spec_.name; }

    [[nodiscard]] std::size_t object_count() const { return object_names_.size(); }
    [[nodiscard]] const std::string& object_name(ObjectId o) const { return object_names_.at(o); }
    [[nodiscard]] TypeId object_type(ObjectId o) const { return object_types_.at(o); }
    [[nodiscard]] std::optional<ObjectId> find_object(std::string_view name) const;
    /// Objects whose type is `t` or a subtype, in declaration order.
    [[nodiscard]] const std::vector<ObjectId>& objects_of_type(TypeId t) const { return objects_of_type_.at(t); }

    [[nodiscard]] const State& initial_state() const { return init_; }
    [[nodiscard]] const std::vector<GoalSpec>& goals() const { return spec_.goals; }
    [[nodiscard]] std::optional<std::size_t> find_goal(std::string_view label) const;

    [[nodiscard]] std::size_t dynamic_atom_count() const { return dynamic_atoms_; }
    [[nodiscard]] std::size_t dynamic_fluent_count() const { return dynamic_fluents_; }
    [[nodiscard]] State make_empty_state() const;

    /// Index of a ground atom within the dynamic or rigid atom table.
    struct AtomSlot
    {
        bool rigid = false;
        std::size_t index = 0;
    };
    /// nullopt when an argument does not match the parameter type.
    [[nodiscard]] std::optional<AtomSlot> atom_slot(std::uint32_t predicate,
                                                    std::span<const ObjectId> args) const;
    [[nodiscard]] std::optional<AtomSlot> fluent_slot(std::uint32_t fluent,
                                                      std::span<const ObjectId> args) const;
    [[nodiscard]] bool rigid_atom(std::size_t index) const { return rigid_bits_[index]; }
    [[nodiscard]] std::int64_t rigid_fluent(std::size_t index) const { return rigid_fluents_[index]; }

    [[nodiscard]] bool predicate_is_static(std::uint32_t p) const { return pred_layout_[p].rigid; }
    [[nodiscard]] bool fluent_is_static(std::uint32_t f) const { return fluent_layout_[f].rigid; }

    /// Decode a dynamic atom / fluent index back to its ground form.
    [[nodiscard]] GroundAtom dynamic_atom(std::size_t index) const;
    [[nodiscard]] GroundAtom dynamic_fluent(std::size_t index) const;
    [[nodiscard]] std::string atom_to_string(const GroundAtom& a) const;
    [[nodiscard]] std::string fluent_to_string(const GroundAtom& f) const;
    [[nodiscard]] std::string dynamic_atom_name(std::size_t index) const { return atom_to_string(dynamic_atom(index)); }
    [[nodiscard]] std::string dynamic_fluent_name(std::size_t index) const { return fluent_to_string(dynamic_fluent(index)); }

    /// Operator indices sorted by operator name.
    [[nodiscard]] const std::vector<std::uint32_t>& operator_order() const { return op_order_; }
    /// Argument tuples of operator `op` that pass its rigid preconditions,
    /// lexicographic by object id, flattened with stride = arity.
    [[nodiscard]] const std::vector<ObjectId>& candidate_tuples(std::uint32_t op) const { return grounding_[op].tuples; }
    [[nodiscard]] std::size_t candidate_count(std::uint32_t op) const { return grounding_[op].count; }
    /// Precondition literals of `op` that depend on the state.
    [[nodiscard]] const std::vector<std::uint32_t>& dynamic_preconditions(std::uint32_t op) const { return grounding_[op].dynamic_literals; }
    /// Compiled dynamic preconditions of candidate tuple k of `op`, in
    /// precondition order, minus those that are always true.
    [[nodiscard]] std::span<const CompiledLiteral> compiled_preconditions(std::uint32_t op, std::size_t k) const
    {
        const auto& g = grounding_[op];
        return {g.compiled.data() + g.compiled_begin[k], g.compiled.data() + g.compiled_begin[k + 1]};
    }
    [[nodiscard]] const std::vector<CompiledInstr>& compiled_program(std::uint32_t op) const { return grounding_[op].program; }

private:
    struct Layout
    {
        bool rigid = false;
        std::size_t offset = 0;
        std::size_t size = 0;
        std::vector<std::size_t> strides;
        std::vector<TypeId> param_types;
    };
    struct OperatorGrounding
    {
        std::vector<ObjectId> tuples;
        std::size_t count = 0;
        std::vector<std::uint32_t> dynamic_literals;
        std::vector<CompiledLiteral> compiled;
        std::vector<std::size_t> compiled_begin;  // count + 1 offsets into `compiled`
        std::vector<CompiledInstr> program;
    };

    void build_objects();
    void build_layouts();
    void build_init();
    void build_groundings();
    void compile_preconditions(std::uint32_t op);
    /// Appends `e` as postfix; false when a fluent argument is mistyped.
    bool compile_expr(const NumExpr& e, std::span<const ObjectId> binding, std::vector<CompiledInstr>& prog) const;
    [[nodiscard]] std::optional<AtomSlot> slot(const Layout& lay, std::span<const ObjectId> args) const;
    [[nodiscard]] GroundAtom decode(const std::vector<Layout>& layouts, std::size_t index, bool rigid) const;

    std::shared_ptr<const Domain> domain_;
    ProblemSpec spec_;
    std::vector<std::string> object_names_;
    std::vector<TypeId> object_types_;
    std::vector<std::vector<ObjectId>> objects_of_type_;
    std::vector<std::vector<std::int32_t>> type_position_;  // [type][object]
    std::vector<Layout> pred_layout_;
    std::vector<Layout> fluent_layout_;
    std::size_t dynamic_atoms_ = 0;
    std::size_t rigid_atoms_ = 0;
    std::size_t dynamic_fluents_ = 0;
    std::size_t rigid_fluent_count_ = 0;
    std::vector<bool> rigid_bits_;
    std::vector<std::int64_t> rigid_fluents_;
    State init_;
    std::vector<std::uint32_t> op_order_;
    std::vector<OperatorGrounding> grounding_;
};

}  // namespace goalinf::pddl
