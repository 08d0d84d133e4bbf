// Exact realizations: point counts over the extension tower, q-polynomial
// interpolation with the spare-point rule, Euler/Poincare proxies, counting
// separation, and the fibration counting check.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "k0calc/constructible.hpp"
#include "k0calc/error.hpp"
#include "k0calc/formula.hpp"
#include "k0calc/gf.hpp"
#include "k0calc/k0.hpp"
#include "k0calc/poly.hpp"
#include "k0calc/realize.hpp"
#include "k0calc/session.hpp"

using namespace k0calc;

namespace {

ConstructibleSet parse_set(Session& s, const std::string& text) {
    return to_cells(s, parse_formula(s, text));
}

K0Element cls(Session& s, const std::string& text) { return class_of(parse_set(s, text)); }

mpq_class q_of(long long n) { return mpq_class(static_cast<long>(n)); }

Polynomial random_poly(std::mt19937& rng, FieldTag tag, int nvars, int maxdeg) {
    std::uniform_int_distribution<int> coeff(0, static_cast<int>(tag.p) - 1);
    std::uniform_int_distribution<int> exp(0, maxdeg);
    std::uniform_int_distribution<int> nterms(1, 3);
    Polynomial out = Polynomial::constant(tag, 0);
    const int t = nterms(rng);
    for (int i = 0; i < t; ++i) {
        Polynomial mono = Polynomial::constant(tag, coeff(rng));
        for (int v = 0; v < nvars; ++v) {
            const int e = exp(rng);
            if (e > 0) mono = mono * Polynomial::variable(tag, v, static_cast<unsigned>(e));
        }
        out = out + mono;
    }
    return out;
}

Cell random_cell(std::mt19937& rng, FieldTag tag, int nvars) {
    std::uniform_int_distribution<int> count(0, 2);
    std::vector<Polynomial> eqs, factors;
    for (int i = count(rng); i > 0; --i) eqs.push_back(random_poly(rng, tag, nvars, 2));
    for (int i = count(rng); i > 0; --i) factors.push_back(random_poly(rng, tag, nvars, 2));
    auto norm = normalize_cell(tag, eqs, factors);
    return norm ? *norm : Cell{};
}

ConstructibleSet random_set(std::mt19937& rng, FieldTag tag, int nvars) {
    std::uniform_int_distribution<int> ncells(1, 3);
    std::vector<Cell> cells;
    for (int i = ncells(rng); i > 0; --i) cells.push_back(random_cell(rng, tag, nvars));
    std::vector<int> ambient(static_cast<size_t>(nvars));
    for (int v = 0; v < nvars; ++v) ambient[static_cast<size_t>(v)] = v;
    return make_set(tag, ambient, cells);
}

// Independent oracle: brute-force enumeration of the set's points.
mpq_class enumerated(Session& s, const ConstructibleSet& a, int k) {
    const FieldPtr field = build_field(s.tag().p, k);
    return q_of(static_cast<long long>(points_over(s, a, field).size()));
}

}  // namespace

TEST_CASE("point counts of basic classes") {
    SUBCASE("Lefschetz class counts the affine line") {
        for (long long p : {2LL, 3LL}) {
            Session s(FieldTag{p});
            const K0Element L = K0Element::lefschetz(FieldTag{p});
            long long expect = 1;
            for (int k = 1; k <= 3; ++k) {
                expect *= p;
                CHECK(count_class(s, L, k) == q_of(expect));
            }
        }
    }
    SUBCASE("multiplicative group over the degree-2 extension of F2") {
        Session s(FieldTag{2});
        s.declare_var("x");
        CHECK(count_class(s, cls(s, "x != 0"), 2) == q_of(3));
    }
    SUBCASE("cuspidal cubic has q points over F7") {
        Session s(FieldTag{7});
        s.declare_var("x");
        s.declare_var("y");
        CHECK(count_class(s, cls(s, "y^2 = x^3"), 1) == q_of(7));
    }
    SUBCASE("unit and zero classes") {
        Session s(FieldTag{3});
        CHECK(count_class(s, K0Element::one(FieldTag{3}), 2) == q_of(1));
        CHECK(count_class(s, K0Element{FieldTag{3}}, 2) == q_of(0));
    }
    SUBCASE("negative Lefschetz exponents give power-of-p denominators") {
        Session s(FieldTag{2});
        const K0Element inv = lshift(K0Element::one(FieldTag{2}), -1);
        CHECK(count_class(s, inv, 1) == mpq_class(1, 2));
        CHECK(count_class(s, inv, 3) == mpq_class(1, 8));
        const K0Element mixed = add(K0Element::lefschetz(FieldTag{2}), inv);
        CHECK(count_class(s, mixed, 2) == mpq_class(17, 4));
    }
    SUBCASE("characteristic zero is rejected") {
        Session s(FieldTag{0});
        CHECK_THROWS_AS(count_class(s, K0Element::one(FieldTag{0}), 1), CalcError);
    }
    SUBCASE("enumeration budget is enforced") {
        Session s(FieldTag{5});
        s.declare_var("x");
        s.declare_var("y");
        const K0Element a = cls(s, "y^2 = x^3 + x");
        s.limits().budget = 3;
        CHECK_THROWS_AS(count_class(s, a, 2), CalcError);
    }
    SUBCASE("counts are memoized per symbol and field") {
        Session s(FieldTag{2});
        s.declare_var("x");
        s.declare_var("y");
        const K0Element a = cls(s, "y = x^2");
        CHECK(count_class(s, a, 2) == q_of(4));
        // A budget too small for a fresh enumeration is fine on a warm memo.
        s.limits().budget = 1;
        CHECK(count_class(s, a, 2) == q_of(4));
    }
}

TEST_CASE("count tables over the extension tower") {
    SUBCASE("affine line over F2") {
        Session s(FieldTag{2});
        const CountTable t = count_table(s, K0Element::lefschetz(FieldTag{2}), 3);
        CHECK(t.p == 2);
        CHECK(t.base_deg == 1);
        REQUIRE(t.entries.size() == 3);
        CHECK(t.entries.at(1) == q_of(2));
        CHECK(t.entries.at(2) == q_of(4));
        CHECK(t.entries.at(3) == q_of(8));
    }
    SUBCASE("projective line presented as L+1 over F3") {
        Session s(FieldTag{3});
        const K0Element p1 =
            add(K0Element::lefschetz(FieldTag{3}), K0Element::one(FieldTag{3}));
        const CountTable t = count_table(s, p1, 2);
        CHECK(t.entries.at(1) == q_of(4));
        CHECK(t.entries.at(2) == q_of(10));
    }
    SUBCASE("empty class counts zero everywhere") {
        Session s(FieldTag{2});
        const CountTable t = count_table(s, K0Element{FieldTag{2}}, 3);
        for (const auto& [k, n] : t.entries) CHECK(n == 0);
    }
}

TEST_CASE("q-polynomial interpolation") {
    SUBCASE("affine line fits q") {
        Session s(FieldTag{2});
        const auto fit = interpolate_qpoly(count_table(s, K0Element::lefschetz(FieldTag{2}), 3));
        REQUIRE(fit.has_value());
        CHECK(fit->coeffs == std::vector<mpz_class>{0, 1});
        CHECK(fit->to_string() == "q");
    }
    SUBCASE("circle over F5 fits q - 1") {
        // Independent values: -1 is a square mod 5, so x^2 + y^2 splits into
        // two lines through the origin and the affine conic has q - 1 points.
        Session s(FieldTag{5});
        s.declare_var("x");
        s.declare_var("y");
        const CountTable t = count_table(s, cls(s, "x^2 + y^2 = 1"), 3);
        CHECK(t.entries.at(1) == q_of(4));
        CHECK(t.entries.at(2) == q_of(24));
        CHECK(t.entries.at(3) == q_of(124));
        const auto fit = interpolate_qpoly(t);
        REQUIRE(fit.has_value());
        CHECK(fit->coeffs == std::vector<mpz_class>{-1, 1});
        CHECK(fit->to_string() == "q - 1");
        CHECK(fit->value_at(125) == 124);
    }
    SUBCASE("non-integer fits are rejected") {
        // (2,1), (4,2), (8,4) lie on q/2: degree fine, coefficients not integral.
        CountTable t;
        t.p = 2;
        t.entries[1] = 1;
        t.entries[2] = 2;
        t.entries[3] = 4;
        CHECK_FALSE(interpolate_qpoly(t).has_value());
    }
    SUBCASE("a fit needs one spare point") {
        // (2,3), (4,5) determine q+1 exactly, but nothing checked it: NoFit.
        CountTable t;
        t.p = 2;
        t.entries[1] = 3;
        t.entries[2] = 5;
        CHECK_FALSE(interpolate_qpoly(t).has_value());
    }
    SUBCASE("affine spaces recover their power of q") {
        Session s(FieldTag{2});
        for (int n = 1; n <= 3; ++n) {
            const K0Element an = lshift(K0Element::one(FieldTag{2}), n);
            const auto fit = interpolate_qpoly(count_table(s, an, n + 2));
            REQUIRE(fit.has_value());
            CHECK(fit->degree() == n);
            std::vector<mpz_class> expect(static_cast<size_t>(n) + 1, 0);
            expect.back() = 1;
            CHECK(fit->coeffs == expect);
        }
    }
    SUBCASE("torus squared recovers its polynomial") {
        Session s(FieldTag{3});
        s.declare_var("x");
        s.declare_var("y");
        const auto fit = interpolate_qpoly(count_table(s, cls(s, "x != 0 & y != 0"), 4));
        REQUIRE(fit.has_value());
        CHECK(fit->coeffs == std::vector<mpz_class>{1, -2, 1});
        CHECK(fit->to_string() == "q^2 - 2*q + 1");
    }
    SUBCASE("tables shorter than two rows are degenerate") {
        Session s(FieldTag{2});
        CHECK_THROWS_AS(interpolate_qpoly(count_table(s, K0Element::one(FieldTag{2}), 1)),
                        CalcError);
    }
}

TEST_CASE("Euler characteristic and Poincare proxy") {
    Session s2(FieldTag{2});
    Session s3(FieldTag{3});
    const K0Element p1 = add(K0Element::lefschetz(FieldTag{2}), K0Element::one(FieldTag{2}));

    SUBCASE("projective line") {
        const auto e = euler_characteristic(s2, p1, 3);
        REQUIRE(e.has_value());
        CHECK(*e == 2);
        const auto proxy = poincare_proxy(s2, p1, 3);
        REQUIRE(proxy.has_value());
        CHECK(proxy->coeffs == std::vector<mpz_class>{1, 0, 1});
        CHECK(proxy->to_string("T") == "T^2 + 1");
    }
    SUBCASE("multiplicative group") {
        s3.declare_var("x");
        const K0Element gm = cls(s3, "x != 0");
        const auto e = euler_characteristic(s3, gm, 3);
        REQUIRE(e.has_value());
        CHECK(*e == 0);
        const auto proxy = poincare_proxy(s3, gm, 3);
        REQUIRE(proxy.has_value());
        CHECK(proxy->coeffs == std::vector<mpz_class>{-1, 0, 1});
        CHECK(proxy->to_string("T") == "T^2 - 1");
    }
    SUBCASE("affine plane") {
        const K0Element a2 = lshift(K0Element::one(FieldTag{2}), 2);
        const auto e = euler_characteristic(s2, a2, 4);
        REQUIRE(e.has_value());
        CHECK(*e == 1);
        const auto proxy = poincare_proxy(s2, a2, 4);
        REQUIRE(proxy.has_value());
        CHECK(proxy->coeffs == std::vector<mpz_class>{0, 0, 0, 0, 1});
        CHECK(proxy->to_string("T") == "T^4");
    }
    SUBCASE("no fit propagates as empty") {
        // An elliptic curve does not count polynomially in q over F5.
        Session s5(FieldTag{5});
        s5.declare_var("x");
        s5.declare_var("y");
        const K0Element curve = cls(s5, "y^2 = x^3 + x");
        CHECK_FALSE(euler_characteristic(s5, curve, 3).has_value());
        CHECK_FALSE(poincare_proxy(s5, curve, 3).has_value());
    }
    SUBCASE("euler is additive where everything fits") {
        const K0Element a2 = lshift(K0Element::one(FieldTag{2}), 2);
        s2.declare_var("x");
        const K0Element gm = cls(s2, "x != 0");
        const auto ea = euler_characteristic(s2, a2, 4);
        const auto eb = euler_characteristic(s2, gm, 4);
        const auto esum = euler_characteristic(s2, add(a2, gm), 4);
        REQUIRE(ea.has_value());
        REQUIRE(eb.has_value());
        REQUIRE(esum.has_value());
        CHECK(*esum == *ea + *eb);

        const auto ep1 = euler_characteristic(s2, p1, 4);
        const auto ep1gm = euler_characteristic(s2, add(p1, gm), 4);
        REQUIRE(ep1.has_value());
        REQUIRE(ep1gm.has_value());
        CHECK(*ep1gm == *ep1 + *eb);
    }
}

TEST_CASE("separation by counting") {
    Session s(FieldTag{2});
    s.declare_var("x");
    s.declare_var("y");
    const K0Element L = K0Element::lefschetz(FieldTag{2});

    SUBCASE("the line and the torus differ at the base field") {
        const auto k = separate(s, L, cls(s, "x != 0"), 3);
        REQUIRE(k.has_value());
        CHECK(*k == 1);
    }
    SUBCASE("the cusp and the line never separate") {
        CHECK_FALSE(separate(s, cls(s, "y^2 = x^3"), L, 3).has_value());
    }
    SUBCASE("a class never separates from itself") {
        const K0Element a = cls(s, "y = x^2 | x != 0");
        CHECK_FALSE(separate(s, a, a, 3).has_value());
    }
    SUBCASE("least separating degree is reported") {
        // x^2 + x + 1 is irreducible over F2: 0 roots at k=1... but it has two
        // roots in F4. Against a one-point class the counts first differ at
        // k = 2, after agreeing at... 0 vs 1 differs at k = 1 already; use a
        // class with matching k=1 count instead: the conic y = x^2 (2 points
        // over F2) vs the pair y*(y+1) = 0, x free (0 points? no: 2*2 = 4).
        // Simplest honest example: roots of x^2 + x + 1 (0, 2, 0 points for
        // k = 1, 2, 3) against the empty class: least k is 2.
        const auto k = separate(s, cls(s, "x^2 + x + 1 = 0"), K0Element{FieldTag{2}}, 3);
        REQUIRE(k.has_value());
        CHECK(*k == 2);
    }
}

TEST_CASE("fibration counting check") {
    SUBCASE("trivial fibration of the plane over the line") {
        Session s(FieldTag{2});
        s.declare_var("y");
        s.declare_var("x");
        const ConstructibleSet X = full_space(FieldTag{2}, {0, 1});
        const FibrationCheck r =
            fibration_check(s, X, 1, K0Element::lefschetz(FieldTag{2}), 2);
        CHECK(r.all_pass);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[0].total == q_of(4));
        CHECK(r.rows[0].base_count == q_of(2));
        CHECK(r.rows[0].fiber_count == q_of(2));
        CHECK(r.rows[1].total == q_of(16));
    }
    SUBCASE("a graph is a section: one-point fibers") {
        Session s(FieldTag{3});
        s.declare_var("t");
        s.declare_var("x");
        s.declare_var("y");
        const ConstructibleSet X =
            to_cells_with_ambient(s, parse_formula(s, "x = t^2 & y = t^3"), {0, 1, 2});
        const FibrationCheck r = fibration_check(s, X, 1, K0Element::one(FieldTag{3}), 2);
        CHECK(r.all_pass);
        for (const auto& row : r.rows) CHECK(row.total == row.base_count);
    }
    SUBCASE("hyperbola: the computed base is the punctured line, not the line") {
        Session s(FieldTag{2});
        s.declare_var("a");
        s.declare_var("x");
        const ConstructibleSet X =
            to_cells_with_ambient(s, parse_formula(s, "a * x = 1"), {0, 1});
        const FibrationCheck r = fibration_check(s, X, 1, K0Element::one(FieldTag{2}), 2);
        // Against the computed base {a != 0} the counting identity holds...
        CHECK(r.all_pass);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[0].total == q_of(1));
        CHECK(r.rows[0].base_count == q_of(1));
        // ...but the naive base claim A^1 fails the same identity at k = 1.
        const mpq_class line_count =
            count_class(s, K0Element::lefschetz(FieldTag{2}), 1);
        CHECK(line_count != r.rows[0].base_count);
        // The report's base is exactly the punctured line as a class.
        const K0Element base_cls = class_of(r.base);
        const K0Element punctured = cls(s, "a != 0");
        CHECK(sub(base_cls, punctured).is_zero());
    }
    SUBCASE("wrong fiber class fails the identity") {
        Session s(FieldTag{2});
        s.declare_var("a");
        s.declare_var("x");
        const ConstructibleSet X =
            to_cells_with_ambient(s, parse_formula(s, "a * x = 1"), {0, 1});
        const FibrationCheck r = fibration_check(s, X, 1, K0Element::lefschetz(FieldTag{2}), 2);
        CHECK_FALSE(r.all_pass);
        CHECK_FALSE(r.rows[0].pass);
    }
    SUBCASE("base coordinate count out of range is rejected") {
        Session s(FieldTag{2});
        s.declare_var("a");
        const ConstructibleSet X = full_space(FieldTag{2}, {0});
        CHECK_THROWS_AS(fibration_check(s, X, 2, K0Element::one(FieldTag{2}), 2), CalcError);
        CHECK_THROWS_AS(fibration_check(s, X, 0, K0Element::one(FieldTag{2}), 2), CalcError);
    }
}

TEST_CASE("counting factors through classes: enumeration oracle") {
    // class_of collapses a set to canonical symbols; its count must equal a
    // brute-force enumeration of the original set's points.
    for (long long p : {2LL, 3LL}) {
        std::mt19937 rng(static_cast<unsigned>(911 + p));
        Session s(FieldTag{p});
        s.declare_var("x");
        s.declare_var("y");
        for (int iter = 0; iter < 25; ++iter) {
            const ConstructibleSet A = random_set(rng, s.tag(), 2);
            const K0Element a = class_of(A);
            for (int k = 1; k <= 3; ++k)
                REQUIRE(count_class(s, a, k) == enumerated(s, A, k));
        }
    }
}

TEST_CASE("counting is a ring morphism on random classes") {
    for (long long p : {2LL, 3LL}) {
        std::mt19937 rng(static_cast<unsigned>(1700 + p));
        Session s(FieldTag{p});
        s.declare_var("x");
        s.declare_var("y");
        for (int iter = 0; iter < 20; ++iter) {
            const K0Element a = class_of(random_set(rng, s.tag(), 2));
            const K0Element b = class_of(random_set(rng, s.tag(), 2));
            for (int k = 1; k <= 3; ++k) {
                REQUIRE(count_class(s, add(a, b), k) ==
                        count_class(s, a, k) + count_class(s, b, k));
                REQUIRE(count_class(s, mul(a, b), k) ==
                        count_class(s, a, k) * count_class(s, b, k));
            }
        }
    }
}

TEST_CASE("verified bijections preserve counts") {
    SUBCASE("cusp normalization") {
        Session s(FieldTag{3});
        CertificateRegistry reg;
        const BijectionCertificate cert = register_bijection(
            s, parse_formula(s, "t = 0 | t != 0"), parse_formula(s, "y^2 = x^3"),
            parse_formula(s, "x = t^2 & y = t^3"), reg);
        REQUIRE(cert.verified);
        for (int k = 1; k <= 3; ++k)
            CHECK(count_class(s, cert.source_class, k) == count_class(s, cert.target_class, k));
    }
    SUBCASE("Frobenius graph") {
        for (long long p : {2LL, 3LL}) {
            Session s(FieldTag{p});
            CertificateRegistry reg;
            const std::string graph = "y = x^" + std::to_string(p);
            const BijectionCertificate cert = register_bijection(
                s, parse_formula(s, "x = 0 | x != 0"), parse_formula(s, "y = 0 | y != 0"),
                parse_formula(s, graph), reg);
            REQUIRE(cert.verified);
            for (int k = 1; k <= 3; ++k)
                CHECK(count_class(s, cert.source_class, k) ==
                      count_class(s, cert.target_class, k));
        }
    }
}

TEST_CASE("extending the base field moves the counting convention") {
    Session base(FieldTag{2});
    base.declare_var("x");
    const K0Element gm = cls(base, "x != 0");

    Session ext(FieldTag{2}, 2);
    const K0Element lifted = base_extend(gm, 2);
    for (int k = 1; k <= 2; ++k)
        CHECK(count_class(ext, lifted, k) == count_class(base, gm, 2 * k));

    CHECK_THROWS_AS(base_extend(gm, 0), CalcError);
    CHECK_THROWS_AS(base_extend(K0Element::one(FieldTag{0}), 2), CalcError);
}
