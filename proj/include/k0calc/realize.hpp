// realize.hpp: exact realizations of classes: point counts over the extension
// tower, q-polynomial interpolation with a spare-point consistency check,
// Euler-characteristic and Poincare proxies on the polynomial-count subring,
// counting separation, and the fibration counting check.
#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k0calc/constructible.hpp"
#include "k0calc/k0.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// Exact count of a class over the degree-k extension of the session base
// field: sum of coeff * |cell points| * q^(k*shift) with q the base size
// p^base_deg. Rational when shifts are negative (denominator a power of p).
// Finite characteristic only (CharZeroUnsupported); enumeration respects the
// session budget (SizeLimit). Results are memoized per symbol and field.
mpq_class count_class(Session& s, const K0Element& a, int k);

struct CountTable {
    long long p = 0;                   // characteristic
    int base_deg = 1;                  // counts taken over F_{q^k}, q = p^base_deg
    std::map<int, mpq_class> entries;  // k -> N_k for k = 1..K
};

CountTable count_table(Session& s, const K0Element& a, int K);

// Integer polynomial in the formal variable q; coeffs[i] multiplies q^i and
// the top coefficient is nonzero unless the polynomial is zero.
struct QPolynomial {
    std::vector<mpz_class> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    mpz_class value_at(const mpz_class& q) const;
    std::string to_string(const std::string& var = "q") const;

    bool operator==(const QPolynomial& o) const { return coeffs == o.coeffs; }
    bool operator!=(const QPolynomial& o) const { return !(*this == o); }
};

// The unique polynomial of degree < K through (q^k, N_k) for k = 1..K,
// returned only when its coefficients are integers and its degree is at most
// K-2, so at least one point acted as a consistency check. nullopt is NoFit:
// negative knowledge, never an error. A fit does not prove the class counts
// polynomially at every degree. Requires K >= 2.
std::optional<QPolynomial> interpolate_qpoly(const CountTable& t);

// Value of the q-polynomial fit at q = 1; nullopt when the fit fails.
std::optional<mpz_class> euler_characteristic(Session& s, const K0Element& a, int K);

// Even-weight proxy: coefficient a_i of q^i becomes a_i * T^(2i). Valid on
// the subring where counting is polynomial in q; nullopt when the fit fails.
std::optional<QPolynomial> poincare_proxy(Session& s, const K0Element& a, int K);

// Least k <= K whose counts differ; nullopt is NoSeparation (which is not a
// proof of equality).
std::optional<int> separate(Session& s, const K0Element& a, const K0Element& b, int K);

// Counting check for a family X inside base x fiber coordinates: the base Y
// is the projection of X onto the first m ambient coordinates (computed by
// quantifier elimination, not assumed), and the candidate fiber class is
// supplied by the caller. Verifies count_k(X) = count_k(Y) * count_k(Z) for
// k = 1..K. A full pass is evidence, not proof, that X fibers over Y with
// class-Z fibers.
struct FibrationCheck {
    ConstructibleSet base;  // computed projection of X
    struct Row {
        int k = 0;
        mpq_class total, base_count, fiber_count;
        bool pass = false;
    };
    std::vector<Row> rows;
    bool all_pass = false;
};

FibrationCheck fibration_check(Session& s, const ConstructibleSet& X, int m,
                               const K0Element& fiber, int K);

}  // namespace k0calc
