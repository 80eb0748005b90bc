#include "goalinf/pddl/sexpr.hpp"

#include <cctype>

namespace goalinf::pddl {

ParseError::ParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                         message),
      loc_(loc),
      detail_(message)
{
}

bool SExpr::headed_by(std::string_view head) const
{
    return is_list && !items.empty() && items.front().is_symbol(head);
}

namespace {

class Reader
{
public:
    explicit Reader(std::string_view src) : src_(src) {}

    SExpr read_top()
    {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError(here(), "empty input");
        SExpr e = read();
        skip_ws();
        if (pos_ < src_.size())
            throw ParseError(here(), "unexpected text after top-level expression");
        return e;
    }

private:
    SourceLocation here() const { return {line_, col_}; }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ';') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read()
    {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError(here(), "unexpected end of input");
        SExpr e;
        e.loc = here();
        char c = src_[pos_];
        if (c == ')')
            throw ParseError(here(), "unexpected ')'");
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_ws();
                if (pos_ >= src_.size())
                    throw ParseError(e.loc, "unbalanced '(' (missing ')')");
                if (src_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < src_.size()) {
            char d = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';')
                break;
            advance();
        }
        e.atom.reserve(pos_ - start);
        for (std::size_t i = start; i < pos_; ++i)
            e.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(src_[i]))));
        return e;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

SExpr read_sexpr(std::string_view text)
{
    return Reader(text).read_top();
}

}  // namespace goalinf::pddl
