// poly.hpp: exact sparse multivariate polynomials with the univariate views
// (pseudo-division, resultants) used by quantifier elimination.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k0calc/scalar.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// Exponent vector indexed by session variable index; trailing zeros are trimmed
// so equal monomials have equal representations.
using Monomial = std::vector<unsigned>;

unsigned monomial_total_degree(const Monomial& m);
Monomial monomial_mul(const Monomial& a, const Monomial& b);

// Graded lexicographic: higher total degree first; ties broken by the earliest
// variable with a larger exponent (declaration order = priority).
int monomial_cmp(const Monomial& a, const Monomial& b);

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_cmp(a, b) > 0; }
};

class Polynomial {
  public:
    using TermMap = std::map<Monomial, Scalar, GrlexGreater>;

    explicit Polynomial(FieldTag tag) : tag_(tag) {}  // zero polynomial

    static Polynomial constant(FieldTag tag, long long v) {
        return constant(tag, Scalar::from_int(tag, v));
    }
    static Polynomial constant(FieldTag tag, const Scalar& v);
    static Polynomial variable(FieldTag tag, int var, unsigned exp = 1);

    FieldTag tag() const { return tag_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Scalar constant_value() const;  // value of the degree-0 term (zero scalar if absent)

    // Leading data under the global graded-lex order.
    const Monomial& leading_monomial() const;  // DegenerateInput on zero
    Scalar leading_scalar() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    bool operator==(const Polynomial& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const Polynomial& o) const { return cmp(*this, o) != 0; }

    Polynomial scaled(const Scalar& c) const;
    Polynomial times_var_power(int var, unsigned exp) const;
    Polynomial pow(unsigned e) const;

    // -1 encodes degree -infinity of the zero polynomial.
    int degree_in(int var) const;
    int total_degree() const;

    // Coefficients of x^0, x^1, ... as polynomials in the remaining variables;
    // empty for the zero polynomial.
    std::vector<Polynomial> coefficients_in(int var) const;
    static Polynomial assemble_in(FieldTag tag, int var, const std::vector<Polynomial>& coeffs);
    Polynomial coefficient_of(int var, unsigned exp) const;
    Polynomial leading_coeff_in(int var) const;
    Polynomial drop_leading_in(int var) const;  // truncation: erase the top x-power

    // Variable indices with a positive exponent somewhere, ascending.
    std::vector<int> vars_used() const;
    bool uses_var(int var) const { return degree_in(var) > 0; }

    Polynomial substitute(int var, const Polynomial& value) const;

    // Exact quotient *this / d, or nullopt when d does not divide exactly.
    // Division by zero is a DegenerateDivisor.
    std::optional<Polynomial> divided_by(const Polynomial& d) const;

    // Division remainder: repeatedly cancels leading terms divisible by the
    // leading monomial of d, shelving the rest. Wherever d vanishes, *this
    // and the remainder take the same values. DegenerateDivisor on zero d.
    Polynomial reduced_mod(const Polynomial& d) const;

    // Renames variables through mapper (must be injective on vars_used()).
    Polynomial remap_vars(const std::function<int(int)>& mapper) const;
    // f with x := -b/c cleared of denominators: sum_i f_i * neg_b^i * c^(deg-i).
    Polynomial substitute_linear_cleared(int var, const Polynomial& neg_b,
                                         const Polynomial& c) const;

    // Rationals-mode evaluation at a rational point; finite-characteristic
    // evaluation lives with the field tower code. values[i] is the value of
    // ambient[i]; every used variable must appear in ambient (ArityError).
    mpq_class evaluate_rational(const std::vector<mpq_class>& values,
                                const std::vector<int>& ambient) const;

    // Scalar-level canonical rescalings used for cells and atoms.
    Polynomial monic() const;              // leading graded-lex coefficient becomes 1
    Polynomial primitive_integer() const;  // rationals: integer coeffs, content 1, lc > 0

    static int cmp(const Polynomial& a, const Polynomial& b);  // total order

    std::string to_string(const std::function<std::string(int)>& namer) const;
    std::string to_string(const Session& s) const;

    size_t term_count() const { return terms_.size(); }

  private:
    void add_term(const Monomial& m, const Scalar& c);  // accumulates, drops zeros

    FieldTag tag_;
    TermMap terms_;
};

struct PseudoDivision {
    Polynomial quotient;
    Polynomial remainder;
    int power;
};

// lc_x(g)^power * f = quotient * g + remainder with deg_x(remainder) < deg_x(g)
// and power <= deg_x(f) - deg_x(g) + 1. When lc_x(g) is the constant one the
// multiplication step is skipped, so exact divisions report power 0.
// Requires deg_x(g) >= 1 (DegenerateDivisor otherwise).
PseudoDivision pseudo_divide(const Polynomial& f, const Polynomial& g, int var);

// Determinant of the Sylvester matrix in x, coefficients laid out ascending and
// the f-block rows first; with this layout Res_x(x-a, x-b) = b-a. Only vanishing
// is semantically meaningful downstream. Requires deg_x >= 1 on both sides
// (DegenerateInput otherwise).
Polynomial resultant(const Polynomial& f, const Polynomial& g, int var);

// Canonical defining-polynomial form: monic over F_p, primitive integer with
// positive leading coefficient over the rationals.
Polynomial normalize_defining_poly(const Polynomial& f);

}  // namespace k0calc
