#include "k0calc/realize.hpp"

#include <numeric>
#include <utility>

#include "k0calc/error.hpp"
#include "k0calc/gf.hpp"
#include "k0calc/qe.hpp"

namespace k0calc {

namespace {

// Points of a terminal symbol over the absolute extension F_{p^abs_deg},
// by enumeration; memoized in the session per symbol and field.
mpq_class count_symbol(Session& s, const CellSymbol& sym, int abs_deg) {
    const std::string key = symbol_to_string(sym) + "@F^" + std::to_string(abs_deg);
    auto& memo = s.count_memo();
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const FieldPtr field = build_field(s.tag().p, abs_deg);
    long long total = 1;
    for (int i = 0; i < sym.nvars; ++i) {
        total *= field->size;
        if (total > s.limits().budget)
            fail(ErrorKind::SizeLimit,
                 "enumeration budget exceeded: " + std::to_string(field->size) + "^" +
                     std::to_string(sym.nvars) + " points");
    }

    std::vector<int> ambient(static_cast<size_t>(sym.nvars));
    std::iota(ambient.begin(), ambient.end(), 0);
    const std::vector<FieldElement> elems = enumerate_field(field);
    std::vector<long long> digit(static_cast<size_t>(sym.nvars), 0);
    std::vector<FieldElement> vals(static_cast<size_t>(sym.nvars), FieldElement::zero(field));

    long long count = 0;
    while (true) {
        bool ok = true;
        for (const Polynomial& e : sym.cell.equations) {
            if (!evaluate_at(e, field, vals, ambient).is_zero()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (const Polynomial& g : sym.cell.factors) {
                if (evaluate_at(g, field, vals, ambient).is_zero()) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) ++count;

        size_t i = 0;
        while (i < digit.size() && ++digit[i] == field->size) {
            digit[i] = 0;
            vals[i] = elems[0];
            ++i;
        }
        if (i == digit.size()) break;
        vals[i] = elems[static_cast<size_t>(digit[i])];
    }

    mpq_class result(static_cast<long>(count));
    memo.emplace(key, result);
    return result;
}

}  // namespace

mpq_class count_class(Session& s, const K0Element& a, int k) {
    if (!(a.tag() == s.tag()))
        fail(ErrorKind::FieldMismatch, "class and session base fields differ");
    if (s.tag().p == 0)
        fail(ErrorKind::CharZeroUnsupported, "point counting needs a finite characteristic");
    if (k < 1) fail(ErrorKind::DegenerateInput, "extension degree must be >= 1");

    const int abs_deg = s.base_deg() * k;
    mpz_class qk;
    mpz_ui_pow_ui(qk.get_mpz_t(), static_cast<unsigned long>(s.tag().p),
                  static_cast<unsigned long>(abs_deg));

    mpq_class total = 0;
    for (const auto& t : a.terms()) {
        const mpq_class pts = count_symbol(s, t.symbol, abs_deg);
        mpz_class power;
        mpz_pow_ui(power.get_mpz_t(), qk.get_mpz_t(),
                   static_cast<unsigned long>(t.shift >= 0 ? t.shift : -t.shift));
        mpq_class shifted = t.shift >= 0 ? mpq_class(power) : mpq_class(mpz_class(1), power);
        shifted.canonicalize();
        total += mpq_class(static_cast<long>(t.coeff)) * pts * shifted;
    }
    return total;
}

CountTable count_table(Session& s, const K0Element& a, int K) {
    if (K < 1) fail(ErrorKind::DegenerateInput, "count table needs K >= 1");
    CountTable t;
    t.p = s.tag().p;
    t.base_deg = s.base_deg();
    for (int k = 1; k <= K; ++k) t.entries[k] = count_class(s, a, k);
    return t;
}

mpz_class QPolynomial::value_at(const mpz_class& q) const {
    mpz_class v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * q + *it;
    return v;
}

std::string QPolynomial::to_string(const std::string& var) const {
    if (coeffs.empty()) return "0";
    std::string out;
    for (int d = degree(); d >= 0; --d) {
        const mpz_class& c = coeffs[static_cast<size_t>(d)];
        if (c == 0) continue;
        const bool leading = out.empty();
        mpz_class mag = abs(c);
        if (leading)
            out += (c < 0 ? "-" : "");
        else
            out += (c < 0 ? " - " : " + ");
        const std::string magstr = mag.get_str();
        if (d == 0) {
            out += magstr;
        } else {
            if (mag != 1) out += magstr + "*";
            out += var;
            if (d > 1) out += "^" + std::to_string(d);
        }
    }
    return out;
}

std::optional<QPolynomial> interpolate_qpoly(const CountTable& t) {
    const int K = static_cast<int>(t.entries.size());
    if (K < 2) fail(ErrorKind::DegenerateInput, "interpolation needs at least two counts");
    for (int k = 1; k <= K; ++k)
        if (t.entries.find(k) == t.entries.end())
            fail(ErrorKind::DegenerateInput, "count table keys must be 1..K");
    if (t.p < 2 || t.base_deg < 1) fail(ErrorKind::DegenerateInput, "malformed count table");

    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(t.p),
                  static_cast<unsigned long>(t.base_deg));
    std::vector<mpq_class> xs, ys;
    mpz_class x = 1;
    for (int k = 1; k <= K; ++k) {
        x *= q;
        xs.emplace_back(x);
        ys.push_back(t.entries.at(k));
    }

    // Lagrange basis expansion with exact rational coefficients.
    std::vector<mpq_class> acc(static_cast<size_t>(K), mpq_class(0));
    for (int i = 0; i < K; ++i) {
        std::vector<mpq_class> basis{mpq_class(1)};
        mpq_class denom = 1;
        for (int j = 0; j < K; ++j) {
            if (j == i) continue;
            std::vector<mpq_class> nb(basis.size() + 1, mpq_class(0));
            for (size_t d = 0; d < basis.size(); ++d) {
                nb[d + 1] += basis[d];
                nb[d] -= xs[static_cast<size_t>(j)] * basis[d];
            }
            basis = std::move(nb);
            denom *= xs[static_cast<size_t>(i)] - xs[static_cast<size_t>(j)];
        }
        const mpq_class w = ys[static_cast<size_t>(i)] / denom;
        for (size_t d = 0; d < basis.size(); ++d) acc[d] += w * basis[d];
    }

    while (!acc.empty() && acc.back() == 0) acc.pop_back();
    // Degree must stay below K-1: at least one point was a pure check.
    if (static_cast<int>(acc.size()) > K - 1) return std::nullopt;
    QPolynomial out;
    for (mpq_class& c : acc) {
        c.canonicalize();
        if (c.get_den() != 1) return std::nullopt;
        out.coeffs.push_back(c.get_num());
    }
    return out;
}

std::optional<mpz_class> euler_characteristic(Session& s, const K0Element& a, int K) {
    const std::optional<QPolynomial> fit = interpolate_qpoly(count_table(s, a, K));
    if (!fit) return std::nullopt;
    mpz_class sum = 0;
    for (const mpz_class& c : fit->coeffs) sum += c;
    return sum;
}

std::optional<QPolynomial> poincare_proxy(Session& s, const K0Element& a, int K) {
    const std::optional<QPolynomial> fit = interpolate_qpoly(count_table(s, a, K));
    if (!fit) return std::nullopt;
    QPolynomial out;
    if (fit->is_zero()) return out;
    out.coeffs.assign(static_cast<size_t>(2 * fit->degree() + 1), mpz_class(0));
    for (int i = 0; i <= fit->degree(); ++i)
        out.coeffs[static_cast<size_t>(2 * i)] = fit->coeffs[static_cast<size_t>(i)];
    return out;
}

std::optional<int> separate(Session& s, const K0Element& a, const K0Element& b, int K) {
    if (K < 1) fail(ErrorKind::DegenerateInput, "separation needs K >= 1");
    for (int k = 1; k <= K; ++k)
        if (count_class(s, a, k) != count_class(s, b, k)) return k;
    return std::nullopt;
}

FibrationCheck fibration_check(Session& s, const ConstructibleSet& X, int m,
                               const K0Element& fiber, int K) {
    if (!(X.tag == s.tag()) || !(fiber.tag() == s.tag()))
        fail(ErrorKind::FieldMismatch, "family, fiber, and session base fields differ");
    const int total_vars = static_cast<int>(X.ambient.size());
    if (m < 1 || m > total_vars)
        fail(ErrorKind::ArityError, "base coordinate count out of range");
    if (K < 1) fail(ErrorKind::DegenerateInput, "fibration check needs K >= 1");

    FibrationCheck out;
    ConstructibleSet Y = X;
    for (int i = total_vars - 1; i >= m; --i)
        Y = eliminate_exists(s, Y, Y.ambient[static_cast<size_t>(i)]);
    out.base = Y;

    const K0Element cx = class_of(X);
    const K0Element cy = class_of(Y);
    out.all_pass = true;
    for (int k = 1; k <= K; ++k) {
        FibrationCheck::Row r;
        r.k = k;
        r.total = count_class(s, cx, k);
        r.base_count = count_class(s, cy, k);
        r.fiber_count = count_class(s, fiber, k);
        r.pass = (r.total == r.base_count * r.fiber_count);
        out.all_pass = out.all_pass && r.pass;
        out.rows.push_back(std::move(r));
    }
    return out;
}

CompareOutcome compare(Session& s, const K0Element& a, const K0Element& b,
                       const CertificateRegistry& registry) {
    if (!(a.tag() == b.tag()) || !(a.tag() == s.tag()))
        fail(ErrorKind::FieldMismatch, "compared classes must share the session base field");
    CompareOutcome out;
    const K0Element diff = sub(a, b);
    if (auto steps = rewrite_distance_to_zero(diff, registry, s.limits().rewrite_depth)) {
        out.verdict = Verdict::Equal;
        out.rewrite_steps = *steps;
        return out;
    }
    if (s.tag().p != 0) {
        if (auto k = separate(s, a, b, s.limits().max_ext)) {
            out.verdict = Verdict::Distinct;
            out.witness_k = *k;
            return out;
        }
    }
    out.verdict = Verdict::Unknown;
    return out;
}

}  // namespace k0calc
