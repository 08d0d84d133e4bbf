#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <vector>

#include "doctest.h"
#include "k0calc/constructible.hpp"
#include "k0calc/formula.hpp"
#include "k0calc/gf.hpp"
#include "testutil.hpp"

using namespace k0calc;
using k0test::error_kind_of;
using k0test::random_poly;

namespace {

Polynomial var(const Session& s, const std::string& name, unsigned e = 1) {
    return Polynomial::variable(s.tag(), s.find_var(name), e);
}

// Direct truth evaluation of a quantifier-free formula at a point, the
// semantics the cell conversion must reproduce.
bool truth_eval(const Formula& f, const FieldPtr& K, const std::vector<FieldElement>& point,
                const std::vector<int>& ambient) {
    switch (f.kind()) {
        case FKind::Atom:
            return evaluate_at(f.atom_poly(), K, point, ambient).is_zero();
        case FKind::Not:
            return !truth_eval(f.child(), K, point, ambient);
        case FKind::And:
            return truth_eval(f.child(0), K, point, ambient) &&
                   truth_eval(f.child(1), K, point, ambient);
        case FKind::Or:
            return truth_eval(f.child(0), K, point, ambient) ||
                   truth_eval(f.child(1), K, point, ambient);
        default:
            FAIL("quantifier in quantifier-free evaluation");
            return false;
    }
}

bool in_cells(const ConstructibleSet& a, const FieldPtr& K, const std::vector<FieldElement>& point) {
    for (const Cell& c : a.cells) {
        bool ok = true;
        for (const Polynomial& e : c.equations)
            if (!evaluate_at(e, K, point, a.ambient).is_zero()) {
                ok = false;
                break;
            }
        for (const Polynomial& g : c.factors) {
            if (!ok) break;
            if (evaluate_at(g, K, point, a.ambient).is_zero()) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

Formula random_qf(std::mt19937& rng, Session& s, const std::vector<int>& vars, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 3);
    switch (pick(rng)) {
        case 1:
            return Formula::negation(random_qf(rng, s, vars, depth - 1));
        case 2:
            return Formula::conj(random_qf(rng, s, vars, depth - 1),
                                 random_qf(rng, s, vars, depth - 1));
        case 3:
            return Formula::disj(random_qf(rng, s, vars, depth - 1),
                                 random_qf(rng, s, vars, depth - 1));
        default:
            return Formula::atom(random_poly(rng, s.tag(), vars, 3, 3));
    }
}

}  // namespace

TEST_CASE("parser produces the expected shapes") {
    Session s(FieldTag{5});

    Formula f = parse_formula(s, "E x. x^2 = t");
    REQUIRE(f.kind() == FKind::Exists);
    CHECK(f.quant_var() == s.find_var("x"));
    REQUIRE(f.child().kind() == FKind::Atom);
    CHECK(f.child().atom_poly() == var(s, "x", 2) - var(s, "t"));
    CHECK(free_vars(f) == std::vector<int>{s.find_var("t")});

    Formula g = parse_formula(s, "(x = 0) | !(y = 0)");
    REQUIRE(g.kind() == FKind::Or);
    REQUIRE(g.child(0).kind() == FKind::Atom);
    CHECK(g.child(0).atom_poly() == var(s, "x"));
    REQUIRE(g.child(1).kind() == FKind::Not);
    CHECK(g.child(1).child().atom_poly() == var(s, "y"));

    Formula h = parse_formula(s, "A a. E x. x^2 = a");
    REQUIRE(h.kind() == FKind::ForAll);
    REQUIRE(h.child().kind() == FKind::Exists);
    REQUIRE(h.child().child().kind() == FKind::Atom);
    CHECK(h.child().child().atom_poly() == var(s, "x", 2) - var(s, "a"));
    CHECK(free_vars(h).empty());
    CHECK(h.is_quantifier_free() == false);
}

TEST_CASE("free variables are declared in first-occurrence order") {
    Session s(FieldTag{5});
    ParsedFormula pf = parse_formula_with_ambient(s, "y^2 = x^3 + x*y");
    REQUIRE(pf.free_order.size() == 2);
    CHECK(pf.free_order[0] == s.find_var("y"));
    CHECK(pf.free_order[1] == s.find_var("x"));
    CHECK(free_vars(pf.formula) == std::vector<int>({s.find_var("y"), s.find_var("x")}));

    // A cancelling atom still fixes its ambient from the surface text.
    ParsedFormula tr = parse_formula_with_ambient(s, "z = z");
    REQUIRE(tr.free_order.size() == 1);
    CHECK(tr.free_order[0] == s.find_var("z"));
    CHECK(tr.formula.atom_poly().is_zero());
    CHECK(free_vars(tr.formula).empty());
}

TEST_CASE("parse of pretty_print is the structural identity") {
    const char* texts[] = {
        "x = 0",
        "x != 0",
        "E x. x^2 = t",
        "(x = 0) | !(y = 0)",
        "A a. E x. x^2 = a",
        "x = 0 & y != 0 & z != 0",
        "E x. (x^2 + 3*x = t | x = s) & t != 1",
        "A u. E v. u*v = 1 | u = 0",
        "!(x = 0 & !(y = 0 | x = 1))",
        "E w. w^3 + 2*w + 1 = 0",
    };
    Session s(FieldTag{7});
    for (const char* text : texts) {
        CAPTURE(text);
        Formula f = parse_formula(s, text);
        std::string canon = pretty_print(s, f);
        Formula g = parse_formula(s, canon);
        CHECK(Formula::equal(f, g));
        CHECK(pretty_print(s, g) == canon);
    }
}

TEST_CASE("colliding bound names are renamed apart") {
    Session s(FieldTag{5});
    // The inner binder collides with the outer one and moves to a suffixed name.
    Formula f = parse_formula(s, "A x. (E x. x = t) | x = t");
    REQUIRE(f.kind() == FKind::ForAll);
    int outer = f.quant_var();
    const Formula& body = f.child();
    REQUIRE(body.kind() == FKind::Or);
    REQUIRE(body.child(0).kind() == FKind::Exists);
    int inner = body.child(0).quant_var();
    CHECK(outer != inner);
    CHECK(s.var_name(inner) == "x2");
    // The unparenthesized atom refers to the outer binder.
    CHECK(body.child(1).atom_poly() == Polynomial::variable(s.tag(), outer) - var(s, "t"));

    // A bound name colliding with a free occurrence is also renamed.
    Formula g = parse_formula(s, "y = 0 & (E y. y = 1)");
    REQUIRE(g.child(1).kind() == FKind::Exists);
    CHECK(g.child(1).quant_var() != s.find_var("y"));

    std::string canon = pretty_print(s, f);
    CHECK(Formula::equal(parse_formula(s, canon), f));
}

TEST_CASE("parse errors carry positions and kind") {
    Session s(FieldTag{5});
    CHECK(error_kind_of([&] { parse_formula(s, "E x x = 0"); }) == ErrorKind::ParseError);
    CHECK(error_kind_of([&] { parse_formula(s, "x + = 0"); }) == ErrorKind::ParseError);
    CHECK(error_kind_of([&] { parse_formula(s, "(x = 0"); }) == ErrorKind::ParseError);
    CHECK(error_kind_of([&] { parse_formula(s, "x ? 0"); }) == ErrorKind::ParseError);
    CHECK(error_kind_of([&] { parse_formula(s, ""); }) == ErrorKind::ParseError);
    try {
        parse_formula(s, "x =\n= 0");
        FAIL("expected a parse error");
    } catch (const CalcError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("substitution follows the reference shapes") {
    Session s(FieldTag{5});

    Formula a = parse_formula(s, "x = y");
    Formula a2 = substitute(s, a, s.find_var("x"), var(s, "y"));
    REQUIRE(a2.kind() == FKind::Atom);
    CHECK(a2.atom_poly().is_zero());

    Formula b = parse_formula(s, "E x. x = t");
    int c_idx = s.declare_var("c");
    Polynomial c2 = Polynomial::variable(s.tag(), c_idx, 2);
    Formula b2 = substitute(s, b, s.find_var("t"), c2);
    Formula expect = Formula::exists(s.find_var("x"),
                                     Formula::atom(var(s, "x") - c2));
    CHECK(Formula::equal(b2, expect));

    // Substituting a bound variable is rejected.
    CHECK(error_kind_of([&] { substitute(s, b, s.find_var("x"), var(s, "t")); }) ==
          ErrorKind::BoundVarError);
}

TEST_CASE("substitution avoids capture by renaming the binder") {
    Session s(FieldTag{5});
    Formula f = parse_formula(s, "E x. x = t");
    int x = s.find_var("x");
    int t = s.find_var("t");
    Formula g = substitute(s, f, t, var(s, "x"));
    REQUIRE(g.kind() == FKind::Exists);
    CHECK(g.quant_var() != x);
    CHECK(free_vars(g) == std::vector<int>{x});
    CHECK(g.child().atom_poly() ==
          Polynomial::variable(s.tag(), g.quant_var()) - Polynomial::variable(s.tag(), x));
}

TEST_CASE("to_cells reference shapes") {
    Session s(FieldTag{5});

    ConstructibleSet a = to_cells(s, parse_formula(s, "!(x = 0 & y = 0)"));
    REQUIRE(a.cells.size() == 2);
    for (const Cell& c : a.cells) {
        CHECK(c.equations.empty());
        REQUIRE(c.factors.size() == 1);
    }
    bool sawx = false, sawy = false;
    for (const Cell& c : a.cells) {
        sawx = sawx || c.factors[0] == var(s, "x");
        sawy = sawy || c.factors[0] == var(s, "y");
    }
    CHECK(sawx);
    CHECK(sawy);

    ConstructibleSet b = to_cells(s, parse_formula(s, "x = 0 | x = 0"));
    REQUIRE(b.cells.size() == 1);
    CHECK(b.cells[0].equations.size() == 1);
    CHECK(b.cells[0].factors.empty());

    ConstructibleSet c = to_cells(s, parse_formula(s, "x = 0 & y != 0 & z != 0"));
    REQUIRE(c.cells.size() == 1);
    REQUIRE(c.cells[0].equations.size() == 1);
    CHECK(c.cells[0].equations[0] == var(s, "x"));
    REQUIRE(c.cells[0].factors.size() == 2);
    CHECK(c.cells[0].inequation(s.tag()) == var(s, "y") * var(s, "z"));

    // Unsatisfiable and tautological inputs. A tautology with a cancelling
    // atom yields the one full cell; a disjunctive tautology may stay split
    // (no semantic simplification), but must still cover every point.
    CHECK(to_cells(s, parse_formula(s, "x = 0 & x != 0")).is_syntactically_empty());
    ParsedFormula taut = parse_formula_with_ambient(s, "x = x");
    ConstructibleSet full = to_cells_with_ambient(s, taut.formula, taut.free_order);
    REQUIRE(full.cells.size() == 1);
    CHECK(full.cells[0].is_full());
    ConstructibleSet split = to_cells(s, parse_formula(s, "x = 0 | x != 0"));
    FieldPtr F5 = build_field(5, 1);
    for (long long i = 0; i < 5; ++i)
        CHECK(in_cells(split, F5, {element_at(F5, i)}));

    // Ambient must cover the free variables.
    CHECK(error_kind_of([&] {
              to_cells_with_ambient(s, parse_formula(s, "x = 0 & y = 0"),
                                    std::vector<int>{s.find_var("x")});
          }) == ErrorKind::AmbientError);
}

TEST_CASE("to_cells matches direct truth evaluation on random formulas") {
    std::mt19937 rng(20260815);
    const long long primes[] = {2, 3, 5};
    for (int iter = 0; iter < 200; ++iter) {
        long long p = primes[iter % 3];
        Session s(FieldTag{p});
        int nv = 1 + static_cast<int>(rng() % 3);
        std::vector<int> vars;
        for (int i = 0; i < nv; ++i) vars.push_back(s.declare_var(std::string(1, char('x' + i))));
        Formula f = random_qf(rng, s, vars, 3);
        ConstructibleSet cs = to_cells_with_ambient(s, f, vars);
        for (int k = 1; k <= 2; ++k) {
            FieldPtr K = build_field(p, k);
            long long total = 1;
            for (int i = 0; i < nv; ++i) total *= K->size;
            std::vector<long long> idx(static_cast<size_t>(nv), 0);
            for (long long t = 0; t < total; ++t) {
                long long rem = t;
                std::vector<FieldElement> point;
                for (int i = 0; i < nv; ++i) {
                    point.push_back(element_at(K, rem % K->size));
                    rem /= K->size;
                }
                bool direct = truth_eval(f, K, point, vars);
                bool viacells = in_cells(cs, K, point);
                if (direct != viacells) {
                    CAPTURE(iter);
                    CAPTURE(pretty_print(s, f));
                    REQUIRE(direct == viacells);
                }
            }
        }
    }
}

TEST_CASE("cells_to_formula round-trips the point set") {
    std::mt19937 rng(424242);
    Session s(FieldTag{3});
    std::vector<int> vars{s.declare_var("x"), s.declare_var("y")};
    for (int iter = 0; iter < 40; ++iter) {
        Formula f = random_qf(rng, s, vars, 2);
        ConstructibleSet cs = to_cells_with_ambient(s, f, vars);
        ConstructibleSet back = to_cells_with_ambient(s, cells_to_formula(cs), vars);
        FieldPtr K = build_field(3, 1);
        for (long long i = 0; i < 3; ++i)
            for (long long j = 0; j < 3; ++j) {
                std::vector<FieldElement> pt{element_at(K, i), element_at(K, j)};
                CHECK(in_cells(cs, K, pt) == in_cells(back, K, pt));
            }
    }
}
