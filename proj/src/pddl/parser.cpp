#include "goalinf/pddl/parser.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace goalinf::pddl {

namespace {

const std::set<std::string> kSupportedRequirements = {
    ":strips", ":typing", ":equality", ":negative-preconditions", ":fluents", ":numeric-fluents",
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg)
{
    throw ParseError(at.loc, msg);
}

const SExpr& expect_list(const SExpr& e, const std::string& what)
{
    if (!e.is_list)
        fail(e, "expected " + what);
    return e;
}

const std::string& expect_symbol(const SExpr& e, const std::string& what)
{
    if (e.is_list || e.atom.empty())
        fail(e, "expected " + what);
    return e.atom;
}

std::optional<std::int64_t> as_integer(const SExpr& e)
{
    if (e.is_list || e.atom.empty())
        return std::nullopt;
    std::int64_t v = 0;
    const char* b = e.atom.data();
    const char* end = b + e.atom.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end)
        return std::nullopt;
    return v;
}

bool is_variable_name(const std::string& s) { return !s.empty() && s[0] == '?'; }

struct TypedName
{
    std::string name;
    std::string type;  // empty -> object
    const SExpr* at = nullptr;
    const SExpr* type_at = nullptr;
};

/// `a b - t c - u d` style list.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin)
{
    std::vector<TypedName> out;
    std::size_t pending = 0;
    for (std::size_t i = begin; i < items.size(); ++i) {
        const SExpr& it = items[i];
        if (it.is_list)
            fail(it, "unexpected list in typed list");
        if (it.atom == "-") {
            if (i + 1 >= items.size())
                fail(it, "missing type after '-'");
            const SExpr& ty = items[i + 1];
            if (ty.is_list)
                fail(ty, "unsupported type expression (either-types are not in the supported subset)");
            for (std::size_t k = out.size() - pending; k < out.size(); ++k) {
                out[k].type = ty.atom;
                out[k].type_at = &ty;
            }
            pending = 0;
            ++i;
            continue;
        }
        out.push_back({it.atom, "", &it, nullptr});
        ++pending;
    }
    return out;
}

class DomainBuilder
{
public:
    Domain build(const SExpr& root)
    {
        if (!root.headed_by("define"))
            fail(root, "expected (define (domain ...) ...)");
        if (root.size() < 2 || !root[1].headed_by("domain") || root[1].size() != 2)
            fail(root.size() > 1 ? root[1] : root, "expected (domain NAME)");
        d_.name = expect_symbol(root[1][1], "domain name");
        d_.types.push_back({"object", std::nullopt});

        for (std::size_t i = 2; i < root.size(); ++i) {
            const SExpr& sec = expect_list(root[i], "domain section");
            if (sec.items.empty() || sec[0].is_list)
                fail(sec, "expected section keyword");
            const std::string& key = sec[0].atom;
            if (key == ":requirements")
                requirements(sec);
            else if (key == ":types")
                types(sec);
            else if (key == ":constants")
                constants(sec);
            else if (key == ":predicates")
                signatures(sec, d_.predicates, "predicate");
            else if (key == ":functions")
                signatures(sec, d_.fluents, "function");
            else if (key == ":action")
                actions_.push_back(&sec);
            else
                fail(sec[0], "unsupported domain section '" + key + "'");
        }
        for (const SExpr* a : actions_)
            action(*a);
        return std::move(d_);
    }

private:
    void requirements(const SExpr& sec)
    {
        for (std::size_t i = 1; i < sec.size(); ++i) {
            const std::string& r = expect_symbol(sec[i], "requirement flag");
            if (!kSupportedRequirements.count(r))
                fail(sec[i], "unsupported requirement '" + r + "'");
            d_.requirements.push_back(r);
        }
    }

    TypeId type_id(const std::string& name, const SExpr* at)
    {
        if (name.empty())
            return kRootType;
        auto t = d_.find_type(name);
        if (!t)
            fail(at ? *at : SExpr{}, "undeclared type '" + name + "'");
        return *t;
    }

    void types(const SExpr& sec)
    {
        auto list = parse_typed_list(sec.items, 1);
        for (const auto& tn : list) {
            if (tn.name == "object")
                continue;
            if (d_.find_type(tn.name))
                fail(*tn.at, "duplicate type '" + tn.name + "'");
            d_.types.push_back({tn.name, std::nullopt});
        }
        for (const auto& tn : list) {
            if (!tn.type.empty() && tn.type != "object" && !d_.find_type(tn.type))
                d_.types.push_back({tn.type, std::nullopt});
        }
        for (const auto& tn : list) {
            if (tn.name == "object")
                continue;
            TypeId self = *d_.find_type(tn.name);
            TypeId parent = tn.type.empty() ? kRootType : *d_.find_type(tn.type);
            if (d_.is_subtype(parent, self) && parent != kRootType)
                fail(*tn.at, "cyclic type hierarchy at '" + tn.name + "'");
            d_.types[self].parent = parent;
        }
        for (auto& t : d_.types)
            if (&t != &d_.types.front() && !t.parent)
                t.parent = kRootType;
    }

    void constants(const SExpr& sec)
    {
        for (const auto& tn : parse_typed_list(sec.items, 1)) {
            if (d_.find_constant(tn.name))
                fail(*tn.at, "duplicate constant '" + tn.name + "'");
            d_.constants.push_back({tn.name, type_id(tn.type, tn.type_at)});
        }
    }

    std::vector<TypedVar> params(const SExpr& list, bool variables)
    {
        std::vector<TypedVar> out;
        for (const auto& tn : parse_typed_list(list.items, 0)) {
            if (variables && !is_variable_name(tn.name))
                fail(*tn.at, "expected variable, got '" + tn.name + "'");
            for (const auto& o : out)
                if (o.name == tn.name)
                    fail(*tn.at, "duplicate parameter '" + tn.name + "'");
            out.push_back({tn.name, type_id(tn.type, tn.type_at)});
        }
        return out;
    }

    void signatures(const SExpr& sec, std::vector<Signature>& into, const char* what)
    {
        for (std::size_t i = 1; i < sec.size(); ++i) {
            const SExpr& it = sec[i];
            if (it.is_symbol("-")) {
                // `- number` / `- int` result-type annotation after a function
                if (i + 1 < sec.size())
                    ++i;
                continue;
            }
            expect_list(it, std::string(what) + " declaration");
            if (it.items.empty())
                fail(it, std::string("empty ") + what + " declaration");
            Signature s;
            s.name = expect_symbol(it[0], std::string(what) + " name");
            for (const auto& o : into)
                if (o.name == s.name)
                    fail(it[0], std::string("duplicate ") + what + " '" + s.name + "'");
            SExpr rest;
            rest.is_list = true;
            rest.items.assign(it.items.begin() + 1, it.items.end());
            s.params = params(rest, true);
            into.push_back(std::move(s));
        }
    }

    struct Scope
    {
        const std::vector<TypedVar>* params = nullptr;
    };

    Term term(const SExpr& e, const Scope& sc, TypeId expected, bool check_type)
    {
        const std::string& name = expect_symbol(e, "term");
        if (is_variable_name(name)) {
            if (sc.params) {
                for (std::uint32_t i = 0; i < sc.params->size(); ++i) {
                    if ((*sc.params)[i].name == name) {
                        if (check_type && !d_.is_subtype((*sc.params)[i].type, expected))
                            fail(e, "type mismatch: " + name + " is not a " + d_.types[expected].name);
                        return Term::variable(i);
                    }
                }
            }
            fail(e, "free variable '" + name + "' not among parameters");
        }
        auto c = d_.find_constant(name);
        if (!c)
            fail(e, "unknown object '" + name + "'");
        if (check_type && !d_.is_subtype(d_.constants[*c].type, expected))
            fail(e, "type mismatch: " + name + " is not a " + d_.types[expected].name);
        return Term::constant(*c);
    }

    std::vector<Term> args_for(const SExpr& e, const Signature& sig, const Scope& sc)
    {
        if (e.size() - 1 != sig.params.size())
            fail(e, "wrong number of arguments for '" + sig.name + "'");
        std::vector<Term> out;
        for (std::size_t i = 1; i < e.size(); ++i)
            out.push_back(term(e[i], sc, sig.params[i - 1].type, true));
        return out;
    }

    NumExpr num(const SExpr& e, const Scope& sc)
    {
        if (auto v = as_integer(e))
            return NumExpr::constant(*v);
        if (!e.is_list || e.items.empty() || e[0].is_list)
            fail(e, "expected numeric expression");
        const std::string& head = e[0].atom;
        auto binary = [&](NumExpr::Op op) {
            if (e.size() != 3)
                fail(e, "'" + head + "' takes two operands");
            NumExpr n;
            n.op = op;
            n.operands = {num(e[1], sc), num(e[2], sc)};
            return n;
        };
        if (head == "+")
            return binary(NumExpr::Op::Add);
        if (head == "*")
            return binary(NumExpr::Op::Mul);
        if (head == "-") {
            if (e.size() == 2) {
                NumExpr n;
                n.op = NumExpr::Op::Neg;
                n.operands = {num(e[1], sc)};
                return n;
            }
            return binary(NumExpr::Op::Sub);
        }
        if (head == "abs") {
            if (e.size() != 2)
                fail(e, "'abs' takes one operand");
            NumExpr n;
            n.op = NumExpr::Op::Abs;
            n.operands = {num(e[1], sc)};
            return n;
        }
        auto f = d_.find_fluent(head);
        if (!f)
            fail(e[0], "undeclared function '" + head + "'");
        NumExpr n;
        n.op = NumExpr::Op::Fluent;
        n.fluent = *f;
        n.args = args_for(e, d_.fluents[*f], sc);
        return n;
    }

    static bool is_term_like(const SExpr& e) { return !e.is_list && !as_integer(e); }

    Literal literal(const SExpr& e, const Scope& sc)
    {
        if (!e.is_list || e.items.empty() || e[0].is_list)
            fail(e, "expected literal");
        if (e.headed_by("not")) {
            if (e.size() != 2)
                fail(e, "'not' takes one argument");
            Literal l = literal(e[1], sc);
            if (l.negated)
                fail(e, "double negation is not supported");
            l.negated = true;
            return l;
        }
        const std::string& head = e[0].atom;
        static const std::pair<const char*, Comparison> cmps[] = {
            {"=", Comparison::Eq}, {"<", Comparison::Lt}, {"<=", Comparison::Le},
            {">", Comparison::Gt}, {">=", Comparison::Ge},
        };
        for (const auto& [sym, cmp] : cmps) {
            if (head != sym)
                continue;
            if (e.size() != 3)
                fail(e, "'" + head + "' takes two arguments");
            Literal l;
            if (cmp == Comparison::Eq && is_term_like(e[1]) && is_term_like(e[2])) {
                l.kind = Literal::Kind::Equality;
                l.args = {term(e[1], sc, kRootType, false), term(e[2], sc, kRootType, false)};
                return l;
            }
            l.kind = Literal::Kind::Compare;
            l.cmp = cmp;
            l.lhs = num(e[1], sc);
            l.rhs = num(e[2], sc);
            return l;
        }
        auto p = d_.find_predicate(head);
        if (!p)
            fail(e[0], "undeclared predicate '" + head + "'");
        Literal l;
        l.kind = Literal::Kind::Atom;
        l.predicate = *p;
        l.args = args_for(e, d_.predicates[*p], sc);
        return l;
    }

  public:
    void formula(const SExpr& e, const Scope& sc, std::vector<Literal>& out)
    {
        if (e.headed_by("and")) {
            for (std::size_t i = 1; i < e.size(); ++i)
                formula(e[i], sc, out);
            return;
        }
        if (e.headed_by("or") || e.headed_by("exists") || e.headed_by("forall") || e.headed_by("imply"))
            fail(e, "unsupported formula '" + e[0].atom + "' (outside the supported subset)");
        out.push_back(literal(e, sc));
    }

  private:
    AtomTemplate atom_template(const SExpr& e, const Scope& sc)
    {
        if (!e.is_list || e.items.empty() || e[0].is_list)
            fail(e, "expected atom");
        auto p = d_.find_predicate(e[0].atom);
        if (!p)
            fail(e[0], "undeclared predicate '" + e[0].atom + "'");
        return {*p, args_for(e, d_.predicates[*p], sc)};
    }

    void effect(const SExpr& e, const Scope& sc, Operator& op)
    {
        if (e.headed_by("and")) {
            for (std::size_t i = 1; i < e.size(); ++i)
                effect(e[i], sc, op);
            return;
        }
        if (e.headed_by("not")) {
            if (e.size() != 2)
                fail(e, "'not' takes one argument");
            op.del_effects.push_back(atom_template(e[1], sc));
            return;
        }
        if (e.headed_by("when") || e.headed_by("forall"))
            fail(e, "unsupported effect '" + e[0].atom + "' (conditional/quantified effects are not supported)");
        for (auto [sym, kind] : {std::pair{"assign", FluentUpdate::Kind::Assign},
                                 std::pair{"increase", FluentUpdate::Kind::Increase},
                                 std::pair{"decrease", FluentUpdate::Kind::Decrease}}) {
            if (!e.headed_by(sym))
                continue;
            if (e.size() != 3 || !e[1].is_list || e[1].items.empty())
                fail(e, std::string("malformed '") + sym + "' effect");
            auto f = d_.find_fluent(e[1][0].atom);
            if (!f)
                fail(e[1][0], "undeclared function '" + e[1][0].atom + "'");
            FluentUpdate u;
            u.kind = kind;
            u.fluent = *f;
            u.args = args_for(e[1], d_.fluents[*f], sc);
            u.value = num(e[2], sc);
            op.fluent_effects.push_back(std::move(u));
            return;
        }
        op.add_effects.push_back(atom_template(e, sc));
    }

    void action(const SExpr& sec)
    {
        if (sec.size() < 2)
            fail(sec, "expected action name");
        Operator op;
        op.name = expect_symbol(sec[1], "action name");
        if (d_.find_operator(op.name))
            fail(sec[1], "duplicate action '" + op.name + "'");
        const SExpr* pre = nullptr;
        const SExpr* eff = nullptr;
        for (std::size_t i = 2; i < sec.size(); i += 2) {
            const std::string& key = expect_symbol(sec[i], "action keyword");
            if (i + 1 >= sec.size())
                fail(sec[i], "missing value for " + key);
            if (key == ":parameters")
                op.params = params(expect_list(sec[i + 1], "parameter list"), true);
            else if (key == ":precondition")
                pre = &sec[i + 1];
            else if (key == ":effect")
                eff = &sec[i + 1];
            else
                fail(sec[i], "unsupported action keyword '" + key + "'");
        }
        Scope sc{&op.params};
        if (pre)
            formula(*pre, sc, op.precondition);
        if (eff)
            effect(*eff, sc, op);
        d_.operators.push_back(std::move(op));
    }

    Domain d_;
    std::vector<const SExpr*> actions_;

    friend class ProblemBuilder;
};

class ProblemBuilder
{
public:
    explicit ProblemBuilder(const Domain& d) : d_(d) {}

    ProblemSpec build(const SExpr& root)
    {
        if (!root.headed_by("define"))
            fail(root, "expected (define (problem ...) ...)");
        if (root.size() < 2 || !root[1].headed_by("problem") || root[1].size() != 2)
            fail(root.size() > 1 ? root[1] : root, "expected (problem NAME)");
        p_.name = expect_symbol(root[1][1], "problem name");
        for (const auto& c : d_.constants)
            names_.push_back({c.name, c.type});

        const SExpr* init = nullptr;
        std::vector<const SExpr*> goal_secs;
        for (std::size_t i = 2; i < root.size(); ++i) {
            const SExpr& sec = expect_list(root[i], "problem section");
            if (sec.items.empty() || sec[0].is_list)
                fail(sec, "expected section keyword");
            const std::string& key = sec[0].atom;
            if (key == ":domain") {
                if (sec.size() != 2)
                    fail(sec, "expected (:domain NAME)");
                p_.domain_name = expect_symbol(sec[1], "domain name");
                if (p_.domain_name != d_.name)
                    fail(sec[1], "problem is for domain '" + p_.domain_name + "', not '" + d_.name + "'");
            } else if (key == ":objects") {
                objects(sec);
            } else if (key == ":init") {
                init = &sec;
            } else if (key == ":goal" || key == ":goals") {
                goal_secs.push_back(&sec);
            } else if (key == ":requirements") {
                continue;
            } else {
                fail(sec[0], "unsupported problem section '" + key + "'");
            }
        }
        if (init)
            parse_init(*init);
        for (const SExpr* g : goal_secs)
            parse_goals(*g);
        if (p_.goals.empty())
            fail(root, "problem declares no goals");
        return std::move(p_);
    }

private:
    void objects(const SExpr& sec)
    {
        for (const auto& tn : parse_typed_list(sec.items, 1)) {
            for (const auto& n : names_)
                if (n.name == tn.name)
                    fail(*tn.at, "duplicate object '" + tn.name + "'");
            TypeId t = kRootType;
            if (!tn.type.empty()) {
                auto ft = d_.find_type(tn.type);
                if (!ft)
                    fail(*tn.type_at, "undeclared type '" + tn.type + "'");
                t = *ft;
            }
            names_.push_back({tn.name, t});
            p_.objects.push_back({tn.name, t});
        }
    }

    ObjectId object(const SExpr& e, TypeId expected)
    {
        const std::string& n = expect_symbol(e, "object");
        for (ObjectId i = 0; i < names_.size(); ++i) {
            if (names_[i].name == n) {
                if (!d_.is_subtype(names_[i].type, expected))
                    fail(e, "type mismatch: " + n + " is not a " + d_.types[expected].name);
                return i;
            }
        }
        fail(e, "unknown object '" + n + "'");
    }

    std::vector<ObjectId> ground_args(const SExpr& e, const Signature& sig)
    {
        if (e.size() - 1 != sig.params.size())
            fail(e, "wrong number of arguments for '" + sig.name + "'");
        std::vector<ObjectId> out;
        for (std::size_t i = 1; i < e.size(); ++i)
            out.push_back(object(e[i], sig.params[i - 1].type));
        return out;
    }

    void parse_init(const SExpr& sec)
    {
        for (std::size_t i = 1; i < sec.size(); ++i) {
            const SExpr& e = expect_list(sec[i], "initial fact");
            if (e.items.empty() || e[0].is_list)
                fail(e, "expected initial fact");
            if (e.headed_by("=")) {
                if (e.size() != 3 || !e[1].is_list || e[1].items.empty())
                    fail(e, "expected (= (function args) value)");
                auto f = d_.find_fluent(e[1][0].atom);
                if (!f)
                    fail(e[1][0], "undeclared function '" + e[1][0].atom + "'");
                auto v = as_integer(e[2]);
                if (!v)
                    fail(e[2], "expected integer value");
                p_.init_fluents.push_back({*f, ground_args(e[1], d_.fluents[*f]), *v});
                continue;
            }
            if (e.headed_by("not"))
                fail(e, "negative literals are not allowed in :init (closed world)");
            auto p = d_.find_predicate(e[0].atom);
            if (!p)
                fail(e[0], "undeclared predicate '" + e[0].atom + "'");
            p_.init_atoms.push_back({*p, ground_args(e, d_.predicates[*p])});
        }
    }

    GoalSpec goal(const std::string& label, const SExpr& formula)
    {
        // Reuse the domain builder's literal parser with constants = all objects.
        Domain scratch = d_;
        scratch.constants.clear();
        for (const auto& n : names_)
            scratch.constants.push_back({n.name, n.type});
        DomainBuilder b;
        b.d_ = std::move(scratch);
        GoalSpec g;
        g.label = label;
        b.formula(formula, {}, g.literals);
        for (std::size_t i = 0; i < g.literals.size(); ++i) {
            for (std::size_t j = i + 1; j < g.literals.size(); ++j) {
                Literal a = g.literals[i];
                a.negated = !a.negated;
                if (a == g.literals[j])
                    fail(formula, "goal '" + label + "' contains a literal and its negation");
            }
        }
        return g;
    }

    void parse_goals(const SExpr& sec)
    {
        if (sec[0].atom == ":goal") {
            if (sec.size() != 2)
                fail(sec, "expected (:goal FORMULA)");
            p_.goals.push_back(goal("goal", sec[1]));
            p_.single_goal_section = true;
            return;
        }
        for (std::size_t i = 1; i < sec.size(); ++i) {
            const SExpr& e = expect_list(sec[i], "(label formula) goal entry");
            if (e.size() != 2)
                fail(e, "expected (label formula) goal entry");
            const std::string& label = expect_symbol(e[0], "goal label");
            for (const auto& g : p_.goals)
                if (g.label == label)
                    fail(e[0], "duplicate goal label '" + label + "'");
            p_.goals.push_back(goal(label, e[1]));
        }
    }

    struct Named
    {
        std::string name;
        TypeId type;
    };
    const Domain& d_;
    ProblemSpec p_;
    std::vector<Named> names_;
};

// ---- printing ----

std::string term_text(const Term& t, const std::vector<TypedVar>* params,
                      const std::vector<std::string>& objects)
{
    if (t.is_variable())
        return (*params)[t.index].name;
    return objects.at(t.index);
}

std::string num_text(const NumExpr& e, const Domain& d, const std::vector<TypedVar>* params,
                     const std::vector<std::string>& objects)
{
    switch (e.op) {
    case NumExpr::Op::Constant: return std::to_string(e.value);
    case NumExpr::Op::Fluent: {
        std::string s = "(" + d.fluents[e.fluent].name;
        for (const auto& t : e.args)
            s += " " + term_text(t, params, objects);
        return s + ")";
    }
    case NumExpr::Op::Neg: return "(- " + num_text(e.operands[0], d, params, objects) + ")";
    case NumExpr::Op::Abs: return "(abs " + num_text(e.operands[0], d, params, objects) + ")";
    default: break;
    }
    const char* sym = e.op == NumExpr::Op::Add ? "+" : e.op == NumExpr::Op::Sub ? "-" : "*";
    return std::string("(") + sym + " " + num_text(e.operands[0], d, params, objects) + " " +
           num_text(e.operands[1], d, params, objects) + ")";
}

std::string literal_text(const Literal& l, const Domain& d, const std::vector<TypedVar>* params,
                         const std::vector<std::string>& objects)
{
    std::string s;
    switch (l.kind) {
    case Literal::Kind::Atom:
        s = "(" + d.predicates[l.predicate].name;
        for (const auto& t : l.args)
            s += " " + term_text(t, params, objects);
        s += ")";
        break;
    case Literal::Kind::Equality:
        s = "(= " + term_text(l.args[0], params, objects) + " " + term_text(l.args[1], params, objects) + ")";
        break;
    case Literal::Kind::Compare:
        s = "(" + std::string(to_string(l.cmp)) + " " + num_text(l.lhs, d, params, objects) + " " +
            num_text(l.rhs, d, params, objects) + ")";
        break;
    }
    return l.negated ? "(not " + s + ")" : s;
}

std::string typed_vars(const std::vector<TypedVar>& vs, const Domain& d)
{
    std::string s;
    for (const auto& v : vs) {
        if (!s.empty())
            s += " ";
        s += v.name + " - " + d.types[v.type].name;
    }
    return s;
}

std::string conjunction(const std::vector<Literal>& lits, const Domain& d,
                        const std::vector<TypedVar>* params, const std::vector<std::string>& objects)
{
    std::string s = "(and";
    for (const auto& l : lits)
        s += " " + literal_text(l, d, params, objects);
    return s + ")";
}

}  // namespace

Domain parse_domain(std::string_view text)
{
    return DomainBuilder().build(read_sexpr(text));
}

ProblemSpec parse_problem_spec(std::string_view text, const Domain& domain)
{
    return ProblemBuilder(domain).build(read_sexpr(text));
}

Problem parse_problem(std::string_view text, std::shared_ptr<const Domain> domain)
{
    ProblemSpec spec = parse_problem_spec(text, *domain);
    return Problem(std::move(domain), std::move(spec));
}

std::string print_domain(const Domain& d)
{
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    if (!d.requirements.empty()) {
        os << "  (:requirements";
        for (const auto& r : d.requirements)
            os << " " << r;
        os << ")\n";
    }
    if (d.types.size() > 1) {
        os << "  (:types";
        for (std::size_t t = 1; t < d.types.size(); ++t)
            os << " " << d.types[t].name << " - " << d.types[*d.types[t].parent].name;
        os << ")\n";
    }
    std::vector<std::string> constant_names;
    if (!d.constants.empty()) {
        os << "  (:constants";
        for (const auto& c : d.constants) {
            os << " " << c.name << " - " << d.types[c.type].name;
            constant_names.push_back(c.name);
        }
        os << ")\n";
    }
    auto sigs = [&](const char* key, const std::vector<Signature>& v) {
        if (v.empty())
            return;
        os << "  (" << key;
        for (const auto& s : v) {
            os << " (" << s.name;
            if (!s.params.empty())
                os << " " << typed_vars(s.params, d);
            os << ")";
        }
        os << ")\n";
    };
    sigs(":predicates", d.predicates);
    sigs(":functions", d.fluents);
    for (const auto& op : d.operators) {
        os << "  (:action " << op.name << "\n";
        os << "    :parameters (" << typed_vars(op.params, d) << ")\n";
        os << "    :precondition " << conjunction(op.precondition, d, &op.params, constant_names) << "\n";
        os << "    :effect (and";
        auto atom = [&](const AtomTemplate& a) {
            std::string s = "(" + d.predicates[a.predicate].name;
            for (const auto& t : a.args)
                s += " " + term_text(t, &op.params, constant_names);
            return s + ")";
        };
        for (const auto& a : op.add_effects)
            os << " " << atom(a);
        for (const auto& a : op.del_effects)
            os << " (not " << atom(a) << ")";
        for (const auto& u : op.fluent_effects) {
            const char* kw = u.kind == FluentUpdate::Kind::Assign     ? "assign"
                             : u.kind == FluentUpdate::Kind::Increase ? "increase"
                                                                      : "decrease";
            std::string f = "(" + d.fluents[u.fluent].name;
            for (const auto& t : u.args)
                f += " " + term_text(t, &op.params, constant_names);
            f += ")";
            os << " (" << kw << " " << f << " " << num_text(u.value, d, &op.params, constant_names) << ")";
        }
        os << "))\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const ProblemSpec& p, const Domain& d)
{
    std::vector<std::string> names;
    for (const auto& c : d.constants)
        names.push_back(c.name);
    for (const auto& o : p.objects)
        names.push_back(o.name);
    std::ostringstream os;
    os << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")\n";
    os << "  (:objects";
    for (const auto& o : p.objects)
        os << " " << o.name << " - " << d.types[o.type].name;
    os << ")\n  (:init";
    for (const auto& a : p.init_atoms) {
        os << " (" << d.predicates[a.predicate].name;
        for (auto o : a.args)
            os << " " << names[o];
        os << ")";
    }
    for (const auto& f : p.init_fluents) {
        os << " (= (" << d.fluents[f.fluent].name;
        for (auto o : f.args)
            os << " " << names[o];
        os << ") " << f.value << ")";
    }
    os << ")\n";
    if (p.single_goal_section && p.goals.size() == 1) {
        os << "  (:goal " << conjunction(p.goals[0].literals, d, nullptr, names) << ")\n";
    } else {
        os << "  (:goals";
        for (const auto& g : p.goals)
            os << "\n    (" << g.label << " " << conjunction(g.literals, d, nullptr, names) << ")";
        os << ")\n";
    }
    os << ")\n";
    return os.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace goalinf::pddl
