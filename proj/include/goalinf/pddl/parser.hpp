#pragma once

#include "goalinf/pddl/domain.hpp"
#include "goalinf/pddl/problem.hpp"
#include "goalinf/pddl/sexpr.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace goalinf::pddl {

/// Parse a domain in the supported subset: `:strips`, `:typing`, `:equality`,
/// `:negative-preconditions` and integer fluents (`:fluents` /
/// `:numeric-fluents`). Throws ParseError for syntax and semantic errors.
Domain parse_domain(std::string_view text);

/// Parse only the problem structure (no grounding).
ProblemSpec parse_problem_spec(std::string_view text, const Domain& domain);

/// Parse and ground a problem. Besides the standard `(:goal F)` section, a
/// `(:goals (label F) ...)` section lists the candidate goal set.
Problem parse_problem(std::string_view text, std::shared_ptr<const Domain> domain);

/// Reprint in the same grammar; parse(print(x)) is structurally equal to x.
std::string print_domain(const Domain& d);
std::string print_problem(const ProblemSpec& p, const Domain& d);

std::string read_file(const std::string& path);

}  // namespace goalinf::pddl
