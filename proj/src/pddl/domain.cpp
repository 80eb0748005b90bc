#include "goalinf/pddl/domain.hpp"

#include <algorithm>

namespace goalinf::pddl {

std::string_view to_string(Comparison c)
{
    switch (c) {
    case Comparison::Eq: return "=";
    case Comparison::Lt: return "<";
    case Comparison::Le: return "<=";
    case Comparison::Gt: return ">";
    case Comparison::Ge: return ">=";
    }
    return "?";
}

namespace {

template <typename T>
std::optional<std::uint32_t> find_by_name(const std::vector<T>& v, std::string_view n)
{
    auto it = std::find_if(v.begin(), v.end(), [&](const T& x) { return x.name == n; });
    if (it == v.end())
        return std::nullopt;
    return static_cast<std::uint32_t>(it - v.begin());
}

}  // namespace

std::optional<TypeId> Domain::find_type(std::string_view n) const { return find_by_name(types, n); }
std::optional<std::uint32_t> Domain::find_predicate(std::string_view n) const { return find_by_name(predicates, n); }
std::optional<std::uint32_t> Domain::find_fluent(std::string_view n) const { return find_by_name(fluents, n); }
std::optional<std::uint32_t> Domain::find_operator(std::string_view n) const { return find_by_name(operators, n); }
std::optional<ObjectId> Domain::find_constant(std::string_view n) const { return find_by_name(constants, n); }

bool Domain::is_subtype(TypeId t, TypeId ancestor) const
{
    for (std::optional<TypeId> cur = t; cur; cur = types.at(*cur).parent) {
        if (*cur == ancestor)
            return true;
    }
    return ancestor == kRootType;
}

bool Domain::predicate_is_static(std::uint32_t p) const
{
    for (const auto& op : operators) {
        for (const auto& a : op.add_effects)
            if (a.predicate == p)
                return false;
        for (const auto& a : op.del_effects)
            if (a.predicate == p)
                return false;
    }
    return true;
}

bool Domain::fluent_is_static(std::uint32_t f) const
{
    for (const auto& op : operators)
        for (const auto& u : op.fluent_effects)
            if (u.fluent == f)
                return false;
    return true;
}

}  // namespace goalinf::pddl
