#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goalinf::pddl {

using TypeId = std::uint32_t;
using ObjectId = std::uint32_t;

/// Every domain has the root type `object` at id 0.
inline constexpr TypeId kRootType = 0;

struct TypeDef
{
    std::string name;
    std::optional<TypeId> parent;
    bool operator==(const TypeDef&) const = default;
};

struct TypedVar
{
    std::string name;
    TypeId type = kRootType;
    bool operator==(const TypedVar&) const = default;
};

/// Shared shape of predicate and (integer) function declarations.
struct Signature
{
    std::string name;
    std::vector<TypedVar> params;
    bool operator==(const Signature&) const = default;
};

/// An argument position inside a schema: an operator parameter or a constant object.
struct Term
{
    enum class Kind : std::uint8_t { Variable, Constant };
    Kind kind = Kind::Constant;
    std::uint32_t index = 0;  // parameter slot or object id

    static Term variable(std::uint32_t slot) { return {Kind::Variable, slot}; }
    static Term constant(ObjectId obj) { return {Kind::Constant, obj}; }
    [[nodiscard]] bool is_variable() const { return kind == Kind::Variable; }
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct NumExpr
{
    enum class Op : std::uint8_t { Constant, Fluent, Add, Sub, Mul, Neg, Abs };
    Op op = Op::Constant;
    std::int64_t value = 0;
    std::uint32_t fluent = 0;
    std::vector<Term> args;       // for Op::Fluent
    std::vector<NumExpr> operands;

    static NumExpr constant(std::int64_t v)
    {
        NumExpr e;
        e.value = v;
        return e;
    }
    bool operator==(const NumExpr&) const = default;
};

enum class Comparison : std::uint8_t { Eq, Lt, Le, Gt, Ge };

std::string_view to_string(Comparison c);

/// One conjunct of a precondition or goal.
struct Literal
{
    enum class Kind : std::uint8_t { Atom, Equality, Compare };
    Kind kind = Kind::Atom;
    bool negated = false;
    std::uint32_t predicate = 0;  // Atom
    std::vector<Term> args;       // Atom arguments, or the two sides of an Equality
    Comparison cmp = Comparison::Eq;
    NumExpr lhs;
    NumExpr rhs;
    bool operator==(const Literal&) const = default;
};

struct AtomTemplate
{
    std::uint32_t predicate = 0;
    std::vector<Term> args;
    bool operator==(const AtomTemplate&) const = default;
};

struct FluentUpdate
{
    enum class Kind : std::uint8_t { Assign, Increase, Decrease };
    Kind kind = Kind::Assign;
    std::uint32_t fluent = 0;
    std::vector<Term> args;
    NumExpr value;
    bool operator==(const FluentUpdate&) const = default;
};

struct Operator
{
    std::string name;
    std::vector<TypedVar> params;
    std::vector<Literal> precondition;
    std::vector<AtomTemplate> add_effects;
    std::vector<AtomTemplate> del_effects;
    std::vector<FluentUpdate> fluent_effects;
    bool operator==(const Operator&) const = default;
};

struct Constant
{
    std::string name;
    TypeId type = kRootType;
    bool operator==(const Constant&) const = default;
};

/// A validated planning domain. Immutable once built by the parser.
struct Domain
{
    std::string name;
    std::vector<std::string> requirements;
    std::vector<TypeDef> types;  // types[0] is `object`
    std::vector<Constant> constants;
    std::vector<Signature> predicates;
    std::vector<Signature> fluents;
    std::vector<Operator> operators;

    bool operator==(const Domain&) const = default;

    [[nodiscard]] std::optional<TypeId> find_type(std::string_view n) const;
    [[nodiscard]] std::optional<std::uint32_t> find_predicate(std::string_view n) const;
    [[nodiscard]] std::optional<std::uint32_t> find_fluent(std::string_view n) const;
    [[nodiscard]] std::optional<std::uint32_t> find_operator(std::string_view n) const;
    [[nodiscard]] std::optional<ObjectId> find_constant(std::string_view n) const;
    [[nodiscard]] bool is_subtype(TypeId t, TypeId ancestor) const;

    /// Predicates never touched by any effect.
    [[nodiscard]] bool predicate_is_static(std::uint32_t p) const;
    /// Functions never updated by any effect.
    [[nodiscard]] bool fluent_is_static(std::uint32_t f) const;
};

}  // namespace goalinf::pddl
