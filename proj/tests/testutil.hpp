// testutil.hpp: shared helpers for the test suites: deterministic random
// generators and error-kind capture.
#pragma once

#include <optional>
#include <random>
#include <vector>

#include "k0calc/poly.hpp"
#include "k0calc/session.hpp"

namespace k0test {

using namespace k0calc;

template <class Fn>
std::optional<ErrorKind> error_kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const CalcError& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline Polynomial random_poly(std::mt19937& rng, FieldTag tag, const std::vector<int>& vars,
                              int max_deg, int max_terms) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> dexp(0, max_deg);
    std::uniform_int_distribution<long long> dcoef(-20, 20);
    Polynomial out(tag);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Polynomial term = Polynomial::constant(tag, dcoef(rng));
        for (int v : vars) {
            int e = dexp(rng);
            if (e > 0) term = term * Polynomial::variable(tag, v, static_cast<unsigned>(e));
        }
        out = out + term;
    }
    return out;
}

// Variant that retries until the result has positive degree in pivot.
inline Polynomial random_poly_positive_deg(std::mt19937& rng, FieldTag tag,
                                           const std::vector<int>& vars, int pivot, int max_deg,
                                           int max_terms) {
    while (true) {
        Polynomial f = random_poly(rng, tag, vars, max_deg, max_terms);
        if (f.degree_in(pivot) >= 1) return f;
    }
}

}  // namespace k0test
