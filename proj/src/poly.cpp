#include "k0calc/poly.hpp"

#include <algorithm>
#include <set>

namespace k0calc {

namespace {

void check_same_tag(const Polynomial& a, const Polynomial& b) {
    if (a.tag() != b.tag())
        fail(ErrorKind::FieldMismatch, "polynomial arithmetic across different base fields");
}

void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

unsigned exponent_of(const Monomial& m, int var) {
    return var >= 0 && var < static_cast<int>(m.size()) ? m[static_cast<size_t>(var)] : 0;
}

Monomial without_var(const Monomial& m, int var) {
    Monomial out = m;
    if (var < static_cast<int>(out.size())) out[static_cast<size_t>(var)] = 0;
    trim(out);
    return out;
}

}  // namespace

unsigned monomial_total_degree(const Monomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    trim(out);
    return out;
}

int monomial_cmp(const Monomial& a, const Monomial& b) {
    unsigned da = monomial_total_degree(a), db = monomial_total_degree(b);
    if (da != db) return da < db ? -1 : 1;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        unsigned ea = i < a.size() ? a[i] : 0;
        unsigned eb = i < b.size() ? b[i] : 0;
        if (ea != eb) return ea < eb ? -1 : 1;
    }
    return 0;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        Scalar sum = it->second + c;
        if (sum.is_zero())
            terms_.erase(it);
        else
            it->second = sum;
    }
}

Polynomial Polynomial::constant(FieldTag tag, const Scalar& v) {
    Polynomial p(tag);
    p.add_term({}, v);
    return p;
}

Polynomial Polynomial::variable(FieldTag tag, int var, unsigned exp) {
    if (var < 0) fail(ErrorKind::VarError, "negative variable index");
    if (exp == 0) return constant(tag, 1);
    Monomial m(static_cast<size_t>(var) + 1, 0);
    m.back() = exp;
    Polynomial p(tag);
    p.add_term(m, Scalar::one(tag));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar Polynomial::constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Scalar::zero(tag_) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
    if (terms_.empty()) fail(ErrorKind::DegenerateInput, "leading monomial of zero");
    return terms_.begin()->first;
}

Scalar Polynomial::leading_scalar() const {
    if (terms_.empty()) fail(ErrorKind::DegenerateInput, "leading coefficient of zero");
    return terms_.begin()->second;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_same_tag(*this, o);
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_same_tag(*this, o);
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_same_tag(*this, o);
    Polynomial out(tag_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) out.add_term(monomial_mul(m1, m2), c1 * c2);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(tag_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Polynomial Polynomial::scaled(const Scalar& c) const {
    Polynomial out(tag_);
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
    return out;
}

Polynomial Polynomial::times_var_power(int var, unsigned exp) const {
    if (exp == 0) return *this;
    Monomial shift(static_cast<size_t>(var) + 1, 0);
    shift.back() = exp;
    Polynomial out(tag_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(monomial_mul(m, shift), c);
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial acc = constant(tag_, 1);
    for (unsigned i = 0; i < e; ++i) acc = acc * (*this);
    return acc;
}

int Polynomial::degree_in(int var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(exponent_of(m, var)));
    return terms_.empty() ? -1 : d;
}

int Polynomial::total_degree() const {
    if (terms_.empty()) return -1;
    return static_cast<int>(monomial_total_degree(terms_.begin()->first));
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
    std::vector<Polynomial> out;
    if (terms_.empty()) return out;
    int d = degree_in(var);
    out.assign(static_cast<size_t>(d) + 1, Polynomial(tag_));
    for (const auto& [m, c] : terms_)
        out[exponent_of(m, var)].add_term(without_var(m, var), c);
    return out;
}

Polynomial Polynomial::assemble_in(FieldTag tag, int var, const std::vector<Polynomial>& coeffs) {
    Polynomial out(tag);
    for (size_t e = 0; e < coeffs.size(); ++e)
        out = out + coeffs[e].times_var_power(var, static_cast<unsigned>(e));
    return out;
}

Polynomial Polynomial::remap_vars(const std::function<int(int)>& mapper) const {
    Polynomial out(tag_);
    for (const auto& [m, c] : terms_) {
        Monomial nm;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            int j = mapper(static_cast<int>(i));
            if (j < 0) fail(ErrorKind::VarError, "remap target out of range");
            if (nm.size() <= static_cast<size_t>(j)) nm.resize(static_cast<size_t>(j) + 1, 0);
            nm[static_cast<size_t>(j)] += m[i];
        }
        out.add_term(nm, c);
    }
    return out;
}

Polynomial Polynomial::coefficient_of(int var, unsigned exp) const {
    Polynomial out(tag_);
    for (const auto& [m, c] : terms_)
        if (exponent_of(m, var) == exp) out.add_term(without_var(m, var), c);
    return out;
}

Polynomial Polynomial::leading_coeff_in(int var) const {
    int d = degree_in(var);
    if (d < 0) return Polynomial(tag_);
    return coefficient_of(var, static_cast<unsigned>(d));
}

Polynomial Polynomial::drop_leading_in(int var) const {
    int d = degree_in(var);
    if (d < 0) return *this;
    Polynomial out(tag_);
    for (const auto& [m, c] : terms_)
        if (exponent_of(m, var) != static_cast<unsigned>(d)) out.terms_.emplace(m, c);
    return out;
}

std::vector<int> Polynomial::vars_used() const {
    std::set<int> seen;
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) seen.insert(static_cast<int>(i));
    return {seen.begin(), seen.end()};
}

Polynomial Polynomial::substitute(int var, const Polynomial& value) const {
    check_same_tag(*this, value);
    if (degree_in(var) <= 0) return *this;
    std::vector<Polynomial> coeffs = coefficients_in(var);
    Polynomial out(tag_);
    Polynomial vpow = constant(tag_, 1);
    for (size_t e = 0; e < coeffs.size(); ++e) {
        if (e > 0) vpow = vpow * value;
        out = out + coeffs[e] * vpow;
    }
    return out;
}

std::optional<Polynomial> Polynomial::divided_by(const Polynomial& d) const {
    check_same_tag(*this, d);
    if (d.is_zero()) fail(ErrorKind::DegenerateDivisor, "exact division by zero");
    Polynomial rem = *this;
    Polynomial quot(tag_);
    const Monomial& dm = d.leading_monomial();
    const Scalar dc = d.leading_scalar();
    while (!rem.is_zero()) {
        const Monomial& rm = rem.leading_monomial();
        // Monomial divisibility: every exponent of the divisor is covered.
        if (rm.size() < dm.size()) return std::nullopt;
        Monomial qm(rm.size(), 0);
        for (size_t i = 0; i < rm.size(); ++i) {
            const unsigned de = i < dm.size() ? dm[i] : 0;
            if (rm[i] < de) return std::nullopt;
            qm[i] = rm[i] - de;
        }
        while (!qm.empty() && qm.back() == 0) qm.pop_back();
        Polynomial t(tag_);
        t.add_term(qm, rem.leading_scalar() / dc);
        quot = quot + t;
        rem = rem - t * d;
    }
    return quot;
}

Polynomial Polynomial::reduced_mod(const Polynomial& d) const {
    check_same_tag(*this, d);
    if (d.is_zero()) fail(ErrorKind::DegenerateDivisor, "division remainder by zero");
    Polynomial work = *this;
    Polynomial rest(tag_);
    const Monomial& dm = d.leading_monomial();
    const Scalar dc = d.leading_scalar();
    while (!work.is_zero()) {
        const Monomial& wm = work.leading_monomial();
        bool divisible = wm.size() >= dm.size();
        if (divisible)
            for (size_t i = 0; i < dm.size(); ++i)
                if (wm[i] < dm[i]) {
                    divisible = false;
                    break;
                }
        Polynomial t(tag_);
        if (divisible) {
            Monomial qm(wm);
            for (size_t i = 0; i < dm.size(); ++i) qm[i] -= dm[i];
            trim(qm);
            t.add_term(qm, work.leading_scalar() / dc);
            work = work - t * d;
        } else {
            t.add_term(wm, work.leading_scalar());
            rest = rest + t;
            work = work - t;
        }
    }
    return rest;
}

Polynomial Polynomial::substitute_linear_cleared(int var, const Polynomial& neg_b,
                                                 const Polynomial& c) const {
    check_same_tag(*this, neg_b);
    check_same_tag(*this, c);
    int d = degree_in(var);
    if (d <= 0) return *this;
    std::vector<Polynomial> coeffs = coefficients_in(var);
    std::vector<Polynomial> cpow(static_cast<size_t>(d) + 1, constant(tag_, 1));
    for (size_t i = 1; i <= static_cast<size_t>(d); ++i) cpow[i] = cpow[i - 1] * c;
    Polynomial out(tag_);
    Polynomial bpow = constant(tag_, 1);
    for (size_t e = 0; e <= static_cast<size_t>(d); ++e) {
        if (e > 0) bpow = bpow * neg_b;
        out = out + coeffs[e] * bpow * cpow[static_cast<size_t>(d) - e];
    }
    return out;
}

mpq_class Polynomial::evaluate_rational(const std::vector<mpq_class>& values,
                                        const std::vector<int>& ambient) const {
    if (!tag_.is_rationals())
        fail(ErrorKind::FieldMismatch, "rational evaluation of a finite-characteristic polynomial");
    if (values.size() != ambient.size())
        fail(ErrorKind::ArityError, "point arity does not match ambient arity");
    std::map<int, mpq_class> env;
    for (size_t i = 0; i < ambient.size(); ++i) env[ambient[i]] = values[i];
    for (int v : vars_used())
        if (env.find(v) == env.end())
            fail(ErrorKind::ArityError, "no value supplied for a used variable");
    mpq_class total = 0;
    for (const auto& [m, c] : terms_) {
        mpq_class term = c.rational();
        for (size_t i = 0; i < m.size(); ++i)
            for (unsigned e = 0; e < m[i]; ++e) term *= env[static_cast<int>(i)];
        total += term;
    }
    return total;
}

Polynomial Polynomial::monic() const {
    if (terms_.empty()) return *this;
    return scaled(leading_scalar().inverse());
}

Polynomial Polynomial::primitive_integer() const {
    if (!tag_.is_rationals())
        fail(ErrorKind::FieldMismatch, "primitive-integer form is a rationals-mode notion");
    if (terms_.empty()) return *this;
    mpz_class den_lcm = 1;
    for (const auto& [m, c] : terms_)
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.rational().get_den().get_mpz_t());
    mpz_class num_gcd = 0;
    for (const auto& [m, c] : terms_) {
        mpz_class scaled_num = c.rational().get_num() * (den_lcm / c.rational().get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled_num.get_mpz_t());
    }
    mpq_class factor(den_lcm, num_gcd);
    factor.canonicalize();
    if (sgn(leading_scalar().rational()) < 0) factor = -factor;
    return scaled(Scalar::from_mpq(tag_, factor));
}

int Polynomial::cmp(const Polynomial& a, const Polynomial& b) {
    check_same_tag(a, b);
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
        int mc = monomial_cmp(ia->first, ib->first);
        if (mc != 0) return mc;
        int sc = Scalar::cmp(ia->second, ib->second);
        if (sc != 0) return sc;
        ++ia;
        ++ib;
    }
    if (ia != a.terms_.end()) return 1;
    if (ib != b.terms_.end()) return -1;
    return 0;
}

std::string Polynomial::to_string(const std::function<std::string(int)>& namer) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Scalar coeff = c;
        if (tag_.is_rationals()) {
            bool neg = sgn(c.rational()) < 0;
            if (first) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            if (neg) coeff = -coeff;
        } else {
            if (!first) out += " + ";
        }
        std::string vars;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += namer(static_cast<int>(i));
            if (m[i] > 1) vars += "^" + std::to_string(m[i]);
        }
        if (vars.empty()) {
            out += coeff.to_string();
        } else if (coeff.is_one()) {
            out += vars;
        } else {
            out += coeff.to_string() + "*" + vars;
        }
        first = false;
    }
    return out;
}

std::string Polynomial::to_string(const Session& s) const {
    return to_string([&s](int v) { return s.var_name(v); });
}

PseudoDivision pseudo_divide(const Polynomial& f, const Polynomial& g, int var) {
    check_same_tag(f, g);
    int dg = g.degree_in(var);
    if (dg < 1) fail(ErrorKind::DegenerateDivisor, "pseudo-division divisor has no positive degree");
    Polynomial lc = g.leading_coeff_in(var);
    bool unit_lc = lc.is_constant() && lc.constant_value().is_one();
    Polynomial q(f.tag());
    Polynomial r = f;
    int power = 0;
    while (true) {
        int dr = r.degree_in(var);
        if (dr < dg) break;
        Polynomial lt = r.leading_coeff_in(var);
        Polynomial step = lt.times_var_power(var, static_cast<unsigned>(dr - dg));
        if (unit_lc) {
            q = q + step;
            r = r - step * g;
        } else {
            q = q * lc + step;
            r = r * lc - step * g;
            ++power;
        }
    }
    return {q, r, power};
}

Polynomial resultant(const Polynomial& f, const Polynomial& g, int var) {
    check_same_tag(f, g);
    int m = f.degree_in(var), n = g.degree_in(var);
    if (m < 1 || n < 1)
        fail(ErrorKind::DegenerateInput, "resultant arguments need positive degree in the variable");
    int size = m + n;
    if (size > 20) fail(ErrorKind::SizeLimit, "Sylvester matrix larger than 20x20");
    std::vector<Polynomial> fc = f.coefficients_in(var);
    std::vector<Polynomial> gc = g.coefficients_in(var);
    // entry(row, col): ascending coefficient layout, f block first.
    auto entry = [&](int row, int col) -> const Polynomial* {
        if (row < n) {
            int k = col - row;
            return (k >= 0 && k <= m) ? &fc[static_cast<size_t>(k)] : nullptr;
        }
        int k = col - (row - n);
        return (k >= 0 && k <= n) ? &gc[static_cast<size_t>(k)] : nullptr;
    };
    // Laplace expansion row by row; states are column subsets with signed minors.
    std::map<unsigned, Polynomial> states;
    states.emplace(0u, Polynomial::constant(f.tag(), 1));
    for (int row = 0; row < size; ++row) {
        std::map<unsigned, Polynomial> next;
        for (const auto& [mask, minor] : states) {
            for (int col = 0; col < size; ++col) {
                unsigned bit = 1u << col;
                if (mask & bit) continue;
                const Polynomial* e = entry(row, col);
                if (e == nullptr || e->is_zero()) continue;
                int sign = 1;
                for (int c = col + 1; c < size; ++c)
                    if (mask & (1u << c)) sign = -sign;
                Polynomial contrib = minor * (*e);
                if (sign < 0) contrib = -contrib;
                auto it = next.find(mask | bit);
                if (it == next.end())
                    next.emplace(mask | bit, contrib);
                else
                    it->second = it->second + contrib;
            }
        }
        states = std::move(next);
    }
    unsigned full = size >= 32 ? ~0u : (1u << size) - 1u;
    auto it = states.find(full);
    return it == states.end() ? Polynomial(f.tag()) : it->second;
}

Polynomial normalize_defining_poly(const Polynomial& f) {
    if (f.is_zero()) return f;
    return f.tag().is_rationals() ? f.primitive_integer() : f.monic();
}

}  // namespace k0calc
