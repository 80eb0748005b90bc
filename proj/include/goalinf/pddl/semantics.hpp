#pragma once

#include "goalinf/pddl/problem.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace goalinf::pddl {

/// apply() was called with an action whose precondition does not hold.
class PreconditionError : public std::runtime_error
{
public:
    PreconditionError(const std::string& action, const std::string& literal);
    [[nodiscard]] const std::string& failing_literal() const { return literal_; }

private:
    std::string literal_;
};

ObjectId resolve(const Term& t, std::span<const ObjectId> binding);

std::int64_t evaluate(const Problem& pb, const NumExpr& e, const State& s,
                      std::span<const ObjectId> binding = {});

bool holds(const Problem& pb, const Literal& lit, const State& s,
           std::span<const ObjectId> binding = {});

/// All ground actions applicable in `s`, ordered by operator name then argument ids.
/// Truth of a compiled literal; `program` is the operator's compiled program.
bool compiled_holds(const CompiledLiteral& c, const CompiledInstr* program, const State& s);

std::vector<GroundAction> available_actions(const Problem& pb, const State& s);

bool is_applicable(const Problem& pb, const State& s, const GroundAction& a);

/// Successor state. Deletes are applied before adds; fluent updates read the
/// predecessor. The no-op returns `s` unchanged.
State apply(const Problem& pb, const State& s, const GroundAction& a);

bool satisfies(const Problem& pb, const State& s, const GoalSpec& g);

/// `(op arg1 arg2)` form; the no-op prints as `(noop)`.
std::string action_to_string(const Problem& pb, const GroundAction& a);
/// Inverse of action_to_string. Throws std::invalid_argument on unknown names.
GroundAction parse_action(const Problem& pb, std::string_view text);

std::string literal_to_string(const Problem& pb, const Literal& lit,
                              std::span<const ObjectId> binding = {});

/// Sorted `(pred args)` strings of the dynamic atoms true in `s`.
std::vector<std::string> fact_strings(const Problem& pb, const State& s);

}  // namespace goalinf::pddl
