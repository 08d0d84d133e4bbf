#include "k0calc/qe.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

#include "k0calc/error.hpp"

namespace k0calc {

namespace {

// One branch of the case-split tree while eliminating a single variable from a
// single cell. Context constraints are free of the variable; live ones all
// have positive degree in it.
struct Branch {
    std::vector<Polynomial> ctx_eqs;
    std::vector<Polynomial> ctx_factors;
    std::vector<Polynomial> eqs;
    std::vector<Polynomial> factors;
};

class Eliminator {
  public:
    Eliminator(Session& s, int var) : s_(s), var_(var) {}

    std::vector<Cell> run(const Cell& cell, TraceNode* t);

  private:
    // Route a constraint to the right bucket. Returns false when the branch
    // is already contradictory (nonzero constant equation, zero factor).
    bool add_eq(Branch& b, const Polynomial& p) const {
        if (p.is_zero()) return true;
        if (p.is_constant()) return false;
        if (p.uses_var(var_))
            b.eqs.push_back(p);
        else
            b.ctx_eqs.push_back(p);
        return true;
    }
    bool add_factor(Branch& b, const Polynomial& p) const {
        if (p.is_zero()) return false;
        if (p.is_constant()) return true;
        if (p.uses_var(var_))
            b.factors.push_back(p);
        else
            b.ctx_factors.push_back(p);
        return true;
    }

    bool known_nonzero(const Branch& b, const Polynomial& p) const {
        Polynomial n = normalize_defining_poly(p);
        for (const Polynomial& g : b.ctx_factors)
            if (Polynomial::cmp(g, n) == 0) return true;
        return false;
    }
    bool known_zero(const Branch& b, const Polynomial& p) const {
        Polynomial n = normalize_defining_poly(p);
        for (const Polynomial& e : b.ctx_eqs)
            if (Polynomial::cmp(e, n) == 0) return true;
        return false;
    }

    void recurse(Branch b, TraceNode* t);
    void reduce_with(Branch b, size_t fi, TraceNode* t);  // lead of eqs[fi] nonzero here
    void emit(const Branch& b, TraceNode* t);

    void leaf(TraceNode* t, std::string label) const {
        if (t) t->children.push_back(TraceNode{std::move(label), {}});
    }

    std::string pname(const Polynomial& p) const { return p.to_string(s_); }

    Session& s_;
    int var_;
    std::vector<Cell> out_;
};

std::vector<Cell> Eliminator::run(const Cell& cell, TraceNode* t) {
    out_.clear();
    Branch b;
    bool alive = true;
    for (const Polynomial& e : cell.equations) alive = alive && add_eq(b, e);
    for (const Polynomial& g : cell.factors) alive = alive && add_factor(b, g);
    if (alive)
        recurse(std::move(b), t);
    else
        leaf(t, "contradictory cell, no branches");
    return std::move(out_);
}

void Eliminator::recurse(Branch b, TraceNode* t) {
    if (b.eqs.empty()) {
        if (b.factors.empty()) {
            // No constraint mentions the variable: every context point lifts.
            leaf(t, "variable unconstrained: keep context");
            emit(b, t);
            return;
        }
        // Over an infinite field the product of the inequations avoids 0 for
        // some value of the variable iff it is nonzero as a polynomial in it,
        // i.e. iff some coefficient is nonzero.
        Polynomial g = Polynomial::constant(s_.tag(), 1);
        for (const Polynomial& q : b.factors) g = g * q;
        TraceNode local{"no equations: some coefficient of " + pname(g) + " is nonzero", {}};
        TraceNode* tt = t ? &local : nullptr;
        for (const Polynomial& c : g.coefficients_in(var_)) {
            if (c.is_zero()) continue;
            Branch piece = b;
            piece.eqs.clear();
            piece.factors.clear();
            if (add_factor(piece, c)) emit(piece, tt);
        }
        if (t) t->children.push_back(std::move(local));
        return;
    }

    // Pick the equation of minimal degree in the variable (ties by the
    // polynomial order, for determinism).
    size_t fi = 0;
    for (size_t i = 1; i < b.eqs.size(); ++i) {
        int di = b.eqs[i].degree_in(var_);
        int df = b.eqs[fi].degree_in(var_);
        if (di < df || (di == df && Polynomial::cmp(b.eqs[i], b.eqs[fi]) < 0)) fi = i;
    }
    Polynomial f = b.eqs[fi];
    Polynomial lc = f.leading_coeff_in(var_);

    if (lc.is_constant() || known_nonzero(b, lc)) {
        reduce_with(std::move(b), fi, t);
        return;
    }

    if (!known_zero(b, lc)) {
        TraceNode local{"case " + pname(lc) + " != 0", {}};
        Branch bn = b;
        bn.ctx_factors.push_back(lc);
        reduce_with(std::move(bn), fi, t ? &local : nullptr);
        if (t) t->children.push_back(std::move(local));
    }

    {
        TraceNode local{"case " + pname(lc) + " = 0: truncate " + pname(f), {}};
        TraceNode* tt = t ? &local : nullptr;
        Branch bz = std::move(b);
        bz.eqs.erase(bz.eqs.begin() + static_cast<long>(fi));
        bz.ctx_eqs.push_back(lc);
        if (add_eq(bz, f.drop_leading_in(var_)))
            recurse(std::move(bz), tt);
        else
            leaf(tt, "truncation contradicts branch");
        if (t) t->children.push_back(std::move(local));
    }
}

void Eliminator::reduce_with(Branch b, size_t fi, TraceNode* t) {
    Polynomial f = b.eqs[fi];
    int d = f.degree_in(var_);

    if (b.eqs.size() == 1) {
        if (b.factors.empty()) {
            // f has positive degree and invertible lead: a root always exists
            // in an algebraically closed field.
            leaf(t, "single equation " + pname(f) + " = 0 with unit lead: solvable");
            b.eqs.clear();
            emit(b, t);
            return;
        }
        // Root avoidance: f = 0 and g != 0 have a common solution iff f does
        // not divide g^d, i.e. iff the pseudo-remainder of g^d by f survives.
        Polynomial g = Polynomial::constant(s_.tag(), 1);
        for (const Polynomial& q : b.factors) g = g * q;
        Polynomial r = pseudo_divide(g.pow(static_cast<unsigned>(d)), f, var_).remainder;
        TraceNode local{"root avoidance: prem(" + pname(g) + "^" + std::to_string(d) + ", " +
                            pname(f) + ") = " + pname(r),
                        {}};
        TraceNode* tt = t ? &local : nullptr;
        if (r.is_zero()) {
            leaf(tt, "remainder vanishes: no solution");
        } else {
            for (const Polynomial& c : r.coefficients_in(var_)) {
                if (c.is_zero()) continue;
                Branch piece = b;
                piece.eqs.clear();
                piece.factors.clear();
                if (add_factor(piece, c)) emit(piece, tt);
            }
        }
        if (t) t->children.push_back(std::move(local));
        return;
    }

    // Several equations: pseudo-reduce everything else modulo f. On this
    // branch the lead of f is nonzero, so at any root of f the remainder of a
    // constraint vanishes (resp. survives) exactly when the constraint does.
    TraceNode local{"reduce modulo " + pname(f), {}};
    TraceNode* tt = t ? &local : nullptr;
    Branch nb;
    nb.ctx_eqs = std::move(b.ctx_eqs);
    nb.ctx_factors = std::move(b.ctx_factors);
    nb.eqs.push_back(f);
    bool alive = true;
    for (size_t i = 0; i < b.eqs.size() && alive; ++i) {
        if (i == fi) continue;
        Polynomial r = pseudo_divide(b.eqs[i], f, var_).remainder;
        if (tt) leaf(tt, "equation " + pname(b.eqs[i]) + " -> remainder " + pname(r));
        alive = add_eq(nb, r);
    }
    for (const Polynomial& g : b.factors) {
        if (!alive) break;
        Polynomial r = pseudo_divide(g, f, var_).remainder;
        if (tt && g.degree_in(var_) >= d)
            leaf(tt, "inequation " + pname(g) + " -> remainder " + pname(r));
        alive = add_factor(nb, r);
    }
    if (alive)
        recurse(std::move(nb), tt);
    else
        leaf(tt, "reduction contradicts branch");
    if (t) t->children.push_back(std::move(local));
}

void Eliminator::emit(const Branch& b, TraceNode* t) {
    std::optional<Cell> c = normalize_cell(s_.tag(), b.ctx_eqs, b.ctx_factors);
    if (!c) {
        leaf(t, "emitted context is contradictory, pruned");
        return;
    }
    leaf(t, "emit " + c->to_string(s_));
    out_.push_back(std::move(*c));
}

Formula project(Session& s, const Formula& body, int v, bool universal, TraceNode* t) {
    Formula work = universal ? Formula::negation(body) : body;
    std::vector<int> amb = free_vars(work);
    if (std::find(amb.begin(), amb.end(), v) == amb.end()) {
        amb.push_back(v);
        std::sort(amb.begin(), amb.end());
    }
    ConstructibleSet cs = to_cells_with_ambient(s, work, amb);
    ConstructibleSet proj = eliminate_exists(s, cs, v, t);
    Formula out = cells_to_formula(proj);
    return universal ? Formula::negation(out) : out;
}

Formula eliminate_rec(Session& s, const Formula& f, TraceNode* t) {
    switch (f.kind()) {
        case FKind::Atom:
            return f;
        case FKind::Not:
            return Formula::negation(eliminate_rec(s, f.child(), t));
        case FKind::And:
            return Formula::conj(eliminate_rec(s, f.child(0), t), eliminate_rec(s, f.child(1), t));
        case FKind::Or:
            return Formula::disj(eliminate_rec(s, f.child(0), t), eliminate_rec(s, f.child(1), t));
        case FKind::Exists: {
            Formula body = eliminate_rec(s, f.child(), t);
            TraceNode local{"exists " + s.var_name(f.quant_var()), {}};
            Formula out = project(s, body, f.quant_var(), false, t ? &local : nullptr);
            if (t) t->children.push_back(std::move(local));
            return out;
        }
        case FKind::ForAll: {
            Formula body = eliminate_rec(s, f.child(), t);
            TraceNode local{"forall " + s.var_name(f.quant_var()) + " (as not-exists-not)", {}};
            Formula out = project(s, body, f.quant_var(), true, t ? &local : nullptr);
            if (t) t->children.push_back(std::move(local));
            return out;
        }
    }
    fail(ErrorKind::DegenerateInput, "unreachable formula kind");
}

bool eval_closed(const Formula& f) {
    switch (f.kind()) {
        case FKind::Atom: {
            const Polynomial& p = f.atom_poly();
            if (!p.is_constant())
                fail(ErrorKind::DegenerateInput, "non-constant atom in a closed formula");
            return p.is_zero();
        }
        case FKind::Not:
            return !eval_closed(f.child());
        case FKind::And:
            return eval_closed(f.child(0)) && eval_closed(f.child(1));
        case FKind::Or:
            return eval_closed(f.child(0)) || eval_closed(f.child(1));
        default:
            fail(ErrorKind::DegenerateInput, "quantifier survived elimination");
    }
}

void trace_text_rec(const TraceNode& t, int depth, std::ostringstream& out) {
    for (int i = 0; i < depth; ++i) out << "  ";
    out << t.label << "\n";
    for (const TraceNode& c : t.children) trace_text_rec(c, depth + 1, out);
}

}  // namespace

std::string trace_to_text(const TraceNode& t) {
    std::ostringstream out;
    trace_text_rec(t, 0, out);
    return out.str();
}

ConstructibleSet eliminate_exists(Session& s, const ConstructibleSet& c, int var,
                                  TraceNode* trace) {
    auto pos = std::find(c.ambient.begin(), c.ambient.end(), var);
    if (pos == c.ambient.end())
        fail(ErrorKind::VarError, "eliminated variable is not part of the ambient space");
    std::vector<int> rest;
    for (int v : c.ambient)
        if (v != var) rest.push_back(v);

    TraceNode local{"eliminate " + s.var_name(var), {}};
    TraceNode* t = trace ? &local : nullptr;
    std::vector<Cell> cells;
    for (const Cell& cell : c.cells) {
        TraceNode per{"cell " + cell.to_string(s), {}};
        Eliminator el(s, var);
        std::vector<Cell> piece = el.run(cell, t ? &per : nullptr);
        cells.insert(cells.end(), piece.begin(), piece.end());
        if (t) t->children.push_back(std::move(per));
    }
    if (trace) trace->children.push_back(std::move(local));
    return make_set(c.tag, std::move(rest), std::move(cells));
}

Formula eliminate_all(Session& s, const Formula& f, TraceNode* trace) {
    return eliminate_rec(s, f, trace);
}

bool decide(Session& s, const Formula& sentence, TraceNode* trace) {
    if (!free_vars(sentence).empty())
        fail(ErrorKind::NotASentence, "decide requires a closed formula");
    Formula g = eliminate_all(s, sentence, trace);
    bool value = eval_closed(g);
    if (trace) trace->children.push_back(TraceNode{value ? "verdict: true" : "verdict: false", {}});
    return value;
}

bool definably_equivalent(Session& s, const Formula& a, const Formula& b) {
    std::vector<int> fa = free_vars(a);
    std::vector<int> fb = free_vars(b);
    if (fa != fb)
        fail(ErrorKind::ArityError, "formulas do not share a free-variable tuple");
    Formula iff = Formula::conj(Formula::disj(Formula::negation(a), b),
                                Formula::disj(Formula::negation(b), a));
    for (auto it = fa.rbegin(); it != fa.rend(); ++it) iff = Formula::forall(*it, iff);
    return decide(s, iff);
}

// Declared with the constructible-set interface; needs the decision procedure.
bool is_empty(Session& s, const ConstructibleSet& a) {
    if (a.is_syntactically_empty()) return true;
    Formula f = cells_to_formula(a);
    for (auto it = a.ambient.rbegin(); it != a.ambient.rend(); ++it)
        f = Formula::exists(*it, f);
    return !decide(s, f);
}

}  // namespace k0calc
