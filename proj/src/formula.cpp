#include "k0calc/formula.hpp"

#include <algorithm>
#include <set>

namespace k0calc {

// ---------------------------------------------------------------------------
// AST

Formula Formula::atom(Polynomial p) {
    Formula f(FKind::Atom, p.tag());
    f.atom_.push_back(std::move(p));
    return f;
}

Formula Formula::negation(Formula f) {
    Formula out(FKind::Not, f.tag());
    out.kids_.push_back(std::move(f));
    return out;
}

Formula Formula::conj(Formula a, Formula b) {
    if (a.tag() != b.tag()) fail(ErrorKind::FieldMismatch, "conjunction across base fields");
    Formula out(FKind::And, a.tag());
    out.kids_.push_back(std::move(a));
    out.kids_.push_back(std::move(b));
    return out;
}

Formula Formula::disj(Formula a, Formula b) {
    if (a.tag() != b.tag()) fail(ErrorKind::FieldMismatch, "disjunction across base fields");
    Formula out(FKind::Or, a.tag());
    out.kids_.push_back(std::move(a));
    out.kids_.push_back(std::move(b));
    return out;
}

Formula Formula::exists(int var, Formula body) {
    Formula out(FKind::Exists, body.tag());
    out.qvar_ = var;
    out.kids_.push_back(std::move(body));
    return out;
}

Formula Formula::forall(int var, Formula body) {
    Formula out(FKind::ForAll, body.tag());
    out.qvar_ = var;
    out.kids_.push_back(std::move(body));
    return out;
}

Formula Formula::conj_all(FieldTag tag, std::vector<Formula> fs) {
    if (fs.empty()) return atom(Polynomial(tag));  // 0 = 0, true
    Formula out = std::move(fs.front());
    for (size_t i = 1; i < fs.size(); ++i) out = conj(std::move(out), std::move(fs[i]));
    return out;
}

Formula Formula::disj_all(FieldTag tag, std::vector<Formula> fs) {
    if (fs.empty()) return atom(Polynomial::constant(tag, 1));  // 1 = 0, false
    Formula out = std::move(fs.front());
    for (size_t i = 1; i < fs.size(); ++i) out = disj(std::move(out), std::move(fs[i]));
    return out;
}

const Polynomial& Formula::atom_poly() const {
    if (kind_ != FKind::Atom) fail(ErrorKind::DegenerateInput, "atom_poly on a non-atom node");
    return atom_.front();
}

const Formula& Formula::child(size_t i) const {
    if (i >= kids_.size()) fail(ErrorKind::DegenerateInput, "formula child index out of range");
    return kids_[i];
}

int Formula::quant_var() const {
    if (kind_ != FKind::Exists && kind_ != FKind::ForAll)
        fail(ErrorKind::DegenerateInput, "quant_var on a non-quantifier node");
    return qvar_;
}

bool Formula::is_quantifier_free() const {
    if (kind_ == FKind::Exists || kind_ == FKind::ForAll) return false;
    for (const Formula& k : kids_)
        if (!k.is_quantifier_free()) return false;
    return true;
}

bool Formula::equal(const Formula& a, const Formula& b) {
    if (a.kind_ != b.kind_ || a.tag_ != b.tag_) return false;
    if (a.kind_ == FKind::Atom) return Polynomial::cmp(a.atom_.front(), b.atom_.front()) == 0;
    if (a.qvar_ != b.qvar_ || a.kids_.size() != b.kids_.size()) return false;
    for (size_t i = 0; i < a.kids_.size(); ++i)
        if (!equal(a.kids_[i], b.kids_[i])) return false;
    return true;
}

namespace {

void collect_free(const Formula& f, std::vector<int>& scope, std::set<int>& out) {
    switch (f.kind()) {
        case FKind::Atom:
            for (int v : f.atom_poly().vars_used())
                if (std::find(scope.begin(), scope.end(), v) == scope.end()) out.insert(v);
            break;
        case FKind::Exists:
        case FKind::ForAll:
            scope.push_back(f.quant_var());
            collect_free(f.child(), scope, out);
            scope.pop_back();
            break;
        default:
            for (size_t i = 0; i < f.child_count(); ++i) collect_free(f.child(i), scope, out);
    }
}

void collect_bound(const Formula& f, std::set<int>& out) {
    if (f.kind() == FKind::Exists || f.kind() == FKind::ForAll) out.insert(f.quant_var());
    for (size_t i = 0; i < f.child_count(); ++i) collect_bound(f.child(i), out);
}

}  // namespace

std::vector<int> free_vars(const Formula& f) {
    std::vector<int> scope;
    std::set<int> out;
    collect_free(f, scope, out);
    return {out.begin(), out.end()};
}

std::vector<int> bound_vars(const Formula& f) {
    std::set<int> out;
    collect_bound(f, out);
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
    LParen, RParen, Bang, NotEq, Eq, Amp, Pipe, Plus, Minus, Star, Caret, Dot,
    Ident, Int, KwExists, KwForAll, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

[[noreturn]] void parse_fail(const std::string& msg, int line, int col) {
    fail(ErrorKind::ParseError,
         msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Tok k, std::string t) { out.push_back({k, std::move(t), line, col}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
            push(Tok::NotEq, "!=");
            i += 2;
            col += 2;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            if (word == "E")
                push(Tok::KwExists, word);
            else if (word == "A")
                push(Tok::KwForAll, word);
            else
                push(Tok::Ident, word);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            push(Tok::Int, text.substr(i, j - i));
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        Tok k;
        switch (c) {
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '!': k = Tok::Bang; break;
            case '=': k = Tok::Eq; break;
            case '&': k = Tok::Amp; break;
            case '|': k = Tok::Pipe; break;
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '^': k = Tok::Caret; break;
            case '.': k = Tok::Dot; break;
            default:
                parse_fail(std::string("unexpected character '") + c + "'", line, col);
        }
        push(k, std::string(1, c));
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// ---------------------------------------------------------------------------
// Surface parse tree (names unresolved)

struct SurfaceTerm {
    mpz_class coeff;
    std::vector<std::pair<std::string, unsigned>> powers;  // textual order
};

struct SurfacePoly {
    std::vector<SurfaceTerm> terms;
};

struct SurfaceNode {
    FKind kind;
    SurfacePoly lhs, rhs;  // Atom only
    bool neq = false;      // Atom written with !=
    std::vector<SurfaceNode> kids;
    std::string qname;  // quantifiers only
};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    SurfaceNode parse() {
        SurfaceNode f = formula();
        expect(Tok::End, "end of input");
        return f;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    void advance() { ++pos_; }
    bool accept(Tok k) {
        if (cur().kind != k) return false;
        advance();
        return true;
    }
    void expect(Tok k, const std::string& what) {
        if (cur().kind != k)
            parse_fail("expected " + what + ", found '" + cur().text + "'", cur().line,
                       cur().col);
        advance();
    }

    SurfaceNode formula() {
        if (cur().kind == Tok::KwExists || cur().kind == Tok::KwForAll) {
            SurfaceNode q;
            q.kind = cur().kind == Tok::KwExists ? FKind::Exists : FKind::ForAll;
            advance();
            if (cur().kind != Tok::Ident)
                parse_fail("expected a variable name after the quantifier", cur().line,
                           cur().col);
            q.qname = cur().text;
            advance();
            expect(Tok::Dot, "'.'");
            q.kids.push_back(formula());
            return q;
        }
        return disjunction();
    }

    SurfaceNode disjunction() {
        SurfaceNode f = conjunction();
        while (accept(Tok::Pipe)) {
            SurfaceNode o;
            o.kind = FKind::Or;
            o.kids.push_back(std::move(f));
            o.kids.push_back(conjunction());
            f = std::move(o);
        }
        return f;
    }

    SurfaceNode conjunction() {
        SurfaceNode f = literal();
        while (accept(Tok::Amp)) {
            SurfaceNode a;
            a.kind = FKind::And;
            a.kids.push_back(std::move(f));
            a.kids.push_back(literal());
            f = std::move(a);
        }
        return f;
    }

    SurfaceNode literal() {
        if (accept(Tok::Bang)) {
            SurfaceNode n;
            n.kind = FKind::Not;
            n.kids.push_back(literal());
            return n;
        }
        if (accept(Tok::LParen)) {
            SurfaceNode f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        SurfaceNode a;
        a.kind = FKind::Atom;
        a.lhs = poly();
        if (accept(Tok::Eq)) {
            a.neq = false;
        } else if (accept(Tok::NotEq)) {
            a.neq = true;
        } else {
            parse_fail("expected '=' or '!=', found '" + cur().text + "'", cur().line,
                       cur().col);
        }
        a.rhs = poly();
        return a;
    }

    SurfacePoly poly() {
        SurfacePoly p;
        bool negate = accept(Tok::Minus);
        p.terms.push_back(term(negate));
        while (true) {
            if (accept(Tok::Plus))
                p.terms.push_back(term(false));
            else if (accept(Tok::Minus))
                p.terms.push_back(term(true));
            else
                break;
        }
        return p;
    }

    SurfaceTerm term(bool negate) {
        SurfaceTerm t;
        t.coeff = negate ? -1 : 1;
        factor(t);
        while (accept(Tok::Star)) factor(t);
        return t;
    }

    void factor(SurfaceTerm& t) {
        if (cur().kind == Tok::Int) {
            mpz_class base(cur().text);
            advance();
            unsigned e = exponent();
            mpz_class powed;
            mpz_pow_ui(powed.get_mpz_t(), base.get_mpz_t(), e);
            t.coeff *= powed;
            return;
        }
        if (cur().kind == Tok::Ident) {
            std::string name = cur().text;
            advance();
            unsigned e = exponent();
            if (e > 0) t.powers.emplace_back(name, e);
            return;
        }
        parse_fail("expected a variable or integer, found '" + cur().text + "'", cur().line,
                   cur().col);
    }

    unsigned exponent() {
        if (!accept(Tok::Caret)) return 1;
        if (cur().kind != Tok::Int)
            parse_fail("expected an integer exponent, found '" + cur().text + "'", cur().line,
                       cur().col);
        const std::string& digits = cur().text;
        if (digits.size() > 4) fail(ErrorKind::SizeLimit, "exponent too large");
        unsigned e = static_cast<unsigned>(std::stoul(digits));
        advance();
        return e;
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

// Free names in textual first-occurrence order, respecting quantifier scope.
void surface_free_names(const SurfaceNode& n, std::vector<std::string>& scope,
                        std::vector<std::string>& order) {
    auto note = [&](const std::string& name) {
        if (std::find(scope.begin(), scope.end(), name) != scope.end()) return;
        if (std::find(order.begin(), order.end(), name) != order.end()) return;
        order.push_back(name);
    };
    if (n.kind == FKind::Atom) {
        for (const SurfaceTerm& t : n.lhs.terms)
            for (const auto& [name, e] : t.powers) note(name);
        for (const SurfaceTerm& t : n.rhs.terms)
            for (const auto& [name, e] : t.powers) note(name);
        return;
    }
    if (n.kind == FKind::Exists || n.kind == FKind::ForAll) {
        scope.push_back(n.qname);
        surface_free_names(n.kids.front(), scope, order);
        scope.pop_back();
        return;
    }
    for (const SurfaceNode& k : n.kids) surface_free_names(k, scope, order);
}

struct Resolver {
    Session& s;
    std::set<std::string> free_names;
    std::set<std::string> chosen_bound;
    std::vector<std::pair<std::string, int>> env;  // innermost last

    Polynomial build_poly(const SurfacePoly& sp) {
        FieldTag tag = s.tag();
        Polynomial out(tag);
        for (const SurfaceTerm& t : sp.terms) {
            Polynomial term = Polynomial::constant(tag, Scalar::from_mpz(tag, t.coeff));
            for (const auto& [name, e] : t.powers)
                term = term * Polynomial::variable(tag, lookup(name), e);
            out = out + term;
        }
        return out;
    }

    int lookup(const std::string& name) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == name) return it->second;
        int idx = s.find_var(name);
        if (idx < 0) fail(ErrorKind::VarError, "unresolved variable " + name);
        return idx;
    }

    Formula resolve(const SurfaceNode& n) {
        switch (n.kind) {
            case FKind::Atom: {
                Formula a = Formula::atom(build_poly(n.lhs) - build_poly(n.rhs));
                return n.neq ? Formula::negation(std::move(a)) : a;
            }
            case FKind::Not:
                return Formula::negation(resolve(n.kids.front()));
            case FKind::And:
                return Formula::conj(resolve(n.kids.front()), resolve(n.kids.back()));
            case FKind::Or:
                return Formula::disj(resolve(n.kids.front()), resolve(n.kids.back()));
            case FKind::Exists:
            case FKind::ForAll: {
                std::string name = n.qname;
                if (free_names.count(name) || chosen_bound.count(name)) {
                    for (int suffix = 2;; ++suffix) {
                        std::string cand = n.qname + std::to_string(suffix);
                        if (!free_names.count(cand) && !chosen_bound.count(cand)) {
                            name = cand;
                            break;
                        }
                    }
                }
                chosen_bound.insert(name);
                int idx = s.declare_var(name);
                env.emplace_back(n.qname, idx);
                Formula body = resolve(n.kids.front());
                env.pop_back();
                return n.kind == FKind::Exists ? Formula::exists(idx, std::move(body))
                                               : Formula::forall(idx, std::move(body));
            }
        }
        fail(ErrorKind::ParseError, "unreachable surface node");
    }
};

}  // namespace

ParsedFormula parse_formula_with_ambient(Session& s, const std::string& text) {
    Parser parser(lex(text));
    SurfaceNode surface = parser.parse();

    std::vector<std::string> scope, order;
    surface_free_names(surface, scope, order);
    ParsedFormula out{Formula::atom(Polynomial(s.tag())), {}};
    Resolver r{s, {order.begin(), order.end()}, {}, {}};
    for (const std::string& name : order) out.free_order.push_back(s.declare_var(name));
    out.formula = r.resolve(surface);
    return out;
}

Formula parse_formula(Session& s, const std::string& text) {
    return parse_formula_with_ambient(s, text).formula;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Formula& f) {
    switch (f.kind()) {
        case FKind::Exists:
        case FKind::ForAll: return 0;
        case FKind::Or: return 1;
        case FKind::And: return 2;
        default: return 3;  // literals: Atom and Not
    }
}

std::string print_rec(const Session& s, const Formula& f) {
    switch (f.kind()) {
        case FKind::Atom:
            return f.atom_poly().to_string(s) + " = 0";
        case FKind::Not: {
            const Formula& c = f.child();
            if (c.kind() == FKind::Atom) return c.atom_poly().to_string(s) + " != 0";
            if (precedence(c) == 3) return "!" + print_rec(s, c);
            return "!(" + print_rec(s, c) + ")";
        }
        case FKind::And: {
            const Formula& l = f.child(0);
            const Formula& r = f.child(1);
            std::string ls = precedence(l) < 2 ? "(" + print_rec(s, l) + ")" : print_rec(s, l);
            std::string rs = precedence(r) < 2 || r.kind() == FKind::And
                                 ? "(" + print_rec(s, r) + ")"
                                 : print_rec(s, r);
            return ls + " & " + rs;
        }
        case FKind::Or: {
            const Formula& l = f.child(0);
            const Formula& r = f.child(1);
            std::string ls = precedence(l) < 1 ? "(" + print_rec(s, l) + ")" : print_rec(s, l);
            std::string rs = precedence(r) < 1 || r.kind() == FKind::Or
                                 ? "(" + print_rec(s, r) + ")"
                                 : print_rec(s, r);
            return ls + " | " + rs;
        }
        case FKind::Exists:
            return "E " + s.var_name(f.quant_var()) + ". " + print_rec(s, f.child());
        case FKind::ForAll:
            return "A " + s.var_name(f.quant_var()) + ". " + print_rec(s, f.child());
    }
    fail(ErrorKind::DegenerateInput, "unreachable formula kind");
}

}  // namespace

std::string pretty_print(const Session& s, const Formula& f) { return print_rec(s, f); }

// ---------------------------------------------------------------------------
// Substitution

namespace {

Formula rename_free_var(Session& s, const Formula& f, int from, int to) {
    switch (f.kind()) {
        case FKind::Atom:
            return Formula::atom(
                f.atom_poly().substitute(from, Polynomial::variable(f.tag(), to)));
        case FKind::Not:
            return Formula::negation(rename_free_var(s, f.child(), from, to));
        case FKind::And:
            return Formula::conj(rename_free_var(s, f.child(0), from, to),
                                 rename_free_var(s, f.child(1), from, to));
        case FKind::Or:
            return Formula::disj(rename_free_var(s, f.child(0), from, to),
                                 rename_free_var(s, f.child(1), from, to));
        case FKind::Exists:
        case FKind::ForAll: {
            if (f.quant_var() == from) return f;  // shadowed; nothing free below
            Formula body = rename_free_var(s, f.child(), from, to);
            return f.kind() == FKind::Exists ? Formula::exists(f.quant_var(), std::move(body))
                                             : Formula::forall(f.quant_var(), std::move(body));
        }
    }
    fail(ErrorKind::DegenerateInput, "unreachable formula kind");
}

Formula substitute_rec(Session& s, const Formula& f, int var, const Polynomial& value) {
    switch (f.kind()) {
        case FKind::Atom:
            return Formula::atom(f.atom_poly().substitute(var, value));
        case FKind::Not:
            return Formula::negation(substitute_rec(s, f.child(), var, value));
        case FKind::And:
            return Formula::conj(substitute_rec(s, f.child(0), var, value),
                                 substitute_rec(s, f.child(1), var, value));
        case FKind::Or:
            return Formula::disj(substitute_rec(s, f.child(0), var, value),
                                 substitute_rec(s, f.child(1), var, value));
        case FKind::Exists:
        case FKind::ForAll: {
            int q = f.quant_var();
            Formula body = f.child();
            if (q == var) return f;  // shadowed (cannot happen after the bound check)
            const std::vector<int> pv = value.vars_used();
            if (std::find(pv.begin(), pv.end(), q) != pv.end()) {
                int fresh = s.fresh_var(s.var_name(q));
                body = rename_free_var(s, body, q, fresh);
                q = fresh;
            }
            Formula sub = substitute_rec(s, body, var, value);
            return f.kind() == FKind::Exists ? Formula::exists(q, std::move(sub))
                                             : Formula::forall(q, std::move(sub));
        }
    }
    fail(ErrorKind::DegenerateInput, "unreachable formula kind");
}

}  // namespace

Formula substitute(Session& s, const Formula& f, int var, const Polynomial& value) {
    std::vector<int> bound = bound_vars(f);
    if (std::find(bound.begin(), bound.end(), var) != bound.end())
        fail(ErrorKind::BoundVarError,
             "cannot substitute bound variable " + s.var_name(var));
    return substitute_rec(s, f, var, value);
}

// ---------------------------------------------------------------------------
// Cells

namespace {

Formula to_nnf(const Formula& f, bool positive) {
    switch (f.kind()) {
        case FKind::Atom:
            return positive ? f : Formula::negation(f);
        case FKind::Not:
            return to_nnf(f.child(), !positive);
        case FKind::And: {
            Formula l = to_nnf(f.child(0), positive);
            Formula r = to_nnf(f.child(1), positive);
            return positive ? Formula::conj(std::move(l), std::move(r))
                            : Formula::disj(std::move(l), std::move(r));
        }
        case FKind::Or: {
            Formula l = to_nnf(f.child(0), positive);
            Formula r = to_nnf(f.child(1), positive);
            return positive ? Formula::disj(std::move(l), std::move(r))
                            : Formula::conj(std::move(l), std::move(r));
        }
        default:
            fail(ErrorKind::DegenerateInput, "cell conversion requires a quantifier-free formula");
    }
}

struct Disjunct {
    std::vector<Polynomial> equations;
    std::vector<Polynomial> inequations;
};

void dnf_rec(const Formula& f, std::vector<Disjunct>& out) {
    switch (f.kind()) {
        case FKind::Atom:
            out.push_back({{f.atom_poly()}, {}});
            return;
        case FKind::Not:
            out.push_back({{}, {f.child().atom_poly()}});  // NNF: child is an atom
            return;
        case FKind::Or:
            dnf_rec(f.child(0), out);
            dnf_rec(f.child(1), out);
            return;
        case FKind::And: {
            std::vector<Disjunct> left, right;
            dnf_rec(f.child(0), left);
            dnf_rec(f.child(1), right);
            if (left.size() * right.size() > 100000)
                fail(ErrorKind::SizeLimit, "disjunctive normal form exceeds the cell budget");
            for (const Disjunct& l : left)
                for (const Disjunct& r : right) {
                    Disjunct d = l;
                    d.equations.insert(d.equations.end(), r.equations.begin(),
                                       r.equations.end());
                    d.inequations.insert(d.inequations.end(), r.inequations.begin(),
                                         r.inequations.end());
                    out.push_back(std::move(d));
                }
            return;
        }
        default:
            fail(ErrorKind::DegenerateInput, "cell conversion requires a quantifier-free formula");
    }
}

}  // namespace

ConstructibleSet to_cells_with_ambient(Session& s, const Formula& f, std::vector<int> ambient) {
    std::vector<int> fv = free_vars(f);
    for (int v : fv)
        if (std::find(ambient.begin(), ambient.end(), v) == ambient.end())
            fail(ErrorKind::AmbientError,
                 "free variable " + s.var_name(v) + " is not in the ambient");
    Formula nnf = to_nnf(f, true);
    std::vector<Disjunct> disjuncts;
    dnf_rec(nnf, disjuncts);
    std::vector<Cell> cells;
    for (Disjunct& d : disjuncts) {
        std::optional<Cell> c =
            normalize_cell(s.tag(), std::move(d.equations), std::move(d.inequations));
        if (c) cells.push_back(std::move(*c));
    }
    return make_set(s.tag(), std::move(ambient), std::move(cells));
}

ConstructibleSet to_cells(Session& s, const Formula& f) {
    return to_cells_with_ambient(s, f, free_vars(f));
}

Formula cells_to_formula(const ConstructibleSet& a) {
    FieldTag tag = a.tag;
    std::vector<Formula> parts;
    for (const Cell& c : a.cells) {
        std::vector<Formula> lits;
        for (const Polynomial& e : c.equations) lits.push_back(Formula::atom(e));
        for (const Polynomial& g : c.factors)
            lits.push_back(Formula::negation(Formula::atom(g)));
        parts.push_back(Formula::conj_all(tag, std::move(lits)));
    }
    return Formula::disj_all(tag, std::move(parts));
}

}  // namespace k0calc
