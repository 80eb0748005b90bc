#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace goalinf::pddl {

struct SourceLocation
{
    int line = 1;
    int column = 1;
};

/// Raised for both syntax and semantic problems in domain/problem text.
/// The location points at the offending token.
class ParseError : public std::runtime_error
{
public:
    ParseError(SourceLocation loc, const std::string& message);

    [[nodiscard]] SourceLocation location() const { return loc_; }
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    SourceLocation loc_;
    std::string detail_;
};

/// A parsed s-expression: either an atom (symbol/number) or a list.
struct SExpr
{
    bool is_list = false;
    std::string atom;  // lower-cased symbol text when !is_list
    std::vector<SExpr> items;
    SourceLocation loc;

    [[nodiscard]] bool is_atom() const { return !is_list; }
    [[nodiscard]] bool is_symbol(std::string_view s) const { return !is_list && atom == s; }
    [[nodiscard]] std::size_t size() const { return items.size(); }
    const SExpr& operator[](std::size_t i) const { return items.at(i); }
    /// True when this is a list whose head atom equals `head`.
    [[nodiscard]] bool headed_by(std::string_view head) const;
};

/// Reads exactly one top-level s-expression; trailing non-comment text is an error.
/// Comments run from `;` to end of line. Symbols are case-folded to lower case.
SExpr read_sexpr(std::string_view text);

}  // namespace goalinf::pddl
