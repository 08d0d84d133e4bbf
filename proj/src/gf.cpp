#include "k0calc/gf.hpp"

#include <algorithm>
#include <map>

namespace k0calc {

namespace {

// Univariate helpers over F_p on ascending coefficient vectors.
using UPoly = std::vector<long long>;

long long mod_inverse(long long a, long long p) {
    long long r = 1, b = a % p, e = p - 2;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

void utrim(UPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

UPoly umul(const UPoly& a, const UPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    UPoly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    utrim(out);
    return out;
}

UPoly umod(UPoly f, const UPoly& g, long long p) {
    long long lg_inv = mod_inverse(g.back(), p);
    while (f.size() >= g.size()) {
        long long c = f.back() * lg_inv % p;
        size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[shift + i] = ((f[shift + i] - c * g[i]) % p + p) % p;
        utrim(f);
        if (f.empty()) break;
    }
    return f;
}

UPoly upow_mod(UPoly base, long long e, const UPoly& m, long long p) {
    UPoly acc = {1};
    while (e > 0) {
        if (e & 1) acc = umod(umul(acc, base, p), m, p);
        base = umod(umul(base, base, p), m, p);
        e >>= 1;
    }
    return acc;
}

UPoly ugcd(UPoly a, UPoly b, long long p) {
    utrim(a);
    utrim(b);
    while (!b.empty()) {
        UPoly r = umod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// No irreducible factor of degree <= k/2: gcd(f, x^(p^j) - x) trivial for all j.
bool is_irreducible(const UPoly& f, long long p) {
    int k = static_cast<int>(f.size()) - 1;
    UPoly xpow = {0, 1};  // x
    for (int j = 1; j <= k / 2; ++j) {
        xpow = upow_mod(xpow, p, f, p);  // x^(p^j) mod f
        UPoly probe = xpow;
        if (probe.size() < 2) probe.resize(2, 0);
        probe[1] = ((probe[1] - 1) % p + p) % p;  // x^(p^j) - x
        utrim(probe);
        UPoly g = ugcd(f, probe, p);
        if (!(g.size() == 1)) return false;
    }
    return true;
}

long long checked_pow(long long p, int k) {
    long long s = 1;
    for (int i = 0; i < k; ++i) {
        s *= p;
        if (s > (1LL << 20)) fail(ErrorKind::SizeLimit, "field size exceeds 2^20");
    }
    return s;
}

void check_field_match(const FieldElement& a, const FieldElement& b) {
    if (!same_field(a.field(), b.field()))
        fail(ErrorKind::FieldMismatch, "element arithmetic across different fields");
}

}  // namespace

FieldPtr build_field(long long p, int k) {
    if (!is_small_prime(p)) fail(ErrorKind::SizeLimit, "characteristic must be a prime <= 97");
    if (k < 1) fail(ErrorKind::SizeLimit, "extension degree must be >= 1");
    long long size = checked_pow(p, k);

    static std::map<std::pair<long long, int>, FieldPtr> cache;
    auto key = std::make_pair(p, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    UPoly modulus;
    if (k == 1) {
        modulus = {0, 1};  // x
    } else {
        // First irreducible monic degree-k polynomial, coefficient vectors
        // ordered lexicographically from the constant term up.
        long long combos = 1;
        for (int i = 0; i < k; ++i) combos *= p;  // <= 2^20
        for (long long idx = 0;; ++idx) {
            if (idx >= combos) fail(ErrorKind::SizeLimit, "no irreducible modulus found");
            UPoly cand(static_cast<size_t>(k) + 1, 0);
            long long rest = idx;
            for (int i = 0; i < k; ++i) {
                cand[static_cast<size_t>(i)] = rest % p;
                rest /= p;
            }
            cand[static_cast<size_t>(k)] = 1;
            if (is_irreducible(cand, p)) {
                modulus = cand;
                break;
            }
        }
    }
    auto field = std::make_shared<ExtensionField>(ExtensionField{p, k, modulus, size});
    cache.emplace(key, field);
    return field;
}

bool same_field(const FieldPtr& a, const FieldPtr& b) {
    return a == b || (a->p == b->p && a->k == b->k && a->modulus == b->modulus);
}

FieldElement::FieldElement(FieldPtr field, std::vector<long long> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
    if (static_cast<int>(coords_.size()) != field_->k)
        fail(ErrorKind::ArityError, "coordinate vector length differs from field degree");
    for (long long& c : coords_) c = ((c % field_->p) + field_->p) % field_->p;
}

FieldElement FieldElement::zero(const FieldPtr& f) {
    return FieldElement(f, std::vector<long long>(static_cast<size_t>(f->k), 0));
}

FieldElement FieldElement::one(const FieldPtr& f) { return from_residue(f, 1); }

FieldElement FieldElement::from_residue(const FieldPtr& f, long long r) {
    std::vector<long long> c(static_cast<size_t>(f->k), 0);
    c[0] = r;
    return FieldElement(f, std::move(c));
}

bool FieldElement::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](long long c) { return c == 0; });
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_field_match(*this, o);
    std::vector<long long> c(coords_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (coords_[i] + o.coords_[i]) % field_->p;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_field_match(*this, o);
    std::vector<long long> c(coords_.size());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = ((coords_[i] - o.coords_[i]) % field_->p + field_->p) % field_->p;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_field_match(*this, o);
    long long p = field_->p;
    UPoly prod(2 * coords_.size(), 0);
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == 0) continue;
        for (size_t j = 0; j < o.coords_.size(); ++j)
            prod[i + j] = (prod[i + j] + coords_[i] * o.coords_[j]) % p;
    }
    utrim(prod);
    prod = umod(std::move(prod), field_->modulus, p);
    prod.resize(coords_.size(), 0);
    return FieldElement(field_, std::move(prod));
}

FieldElement FieldElement::operator-() const {
    std::vector<long long> c(coords_.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = (field_->p - coords_[i]) % field_->p;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::pow(long long e) const {
    FieldElement acc = one(field_);
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) fail(ErrorKind::DegenerateInput, "inverse of zero field element");
    return pow(field_->size - 2);
}

bool FieldElement::operator==(const FieldElement& o) const {
    return same_field(field_, o.field_) && coords_ == o.coords_;
}

std::string FieldElement::to_string() const {
    std::string out = "[";
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(coords_[i]);
    }
    return out + "]";
}

FieldElement element_at(const FieldPtr& f, long long index) {
    if (index < 0 || index >= f->size) fail(ErrorKind::ArityError, "element index out of range");
    std::vector<long long> c(static_cast<size_t>(f->k), 0);
    for (int i = 0; i < f->k && index > 0; ++i) {
        c[static_cast<size_t>(i)] = index % f->p;
        index /= f->p;
    }
    return FieldElement(f, std::move(c));
}

long long element_index(const FieldElement& e) {
    long long idx = 0;
    const auto& c = e.coords();
    for (size_t i = c.size(); i-- > 0;) idx = idx * e.field()->p + c[i];
    return idx;
}

std::vector<FieldElement> enumerate_field(const FieldPtr& f) {
    std::vector<FieldElement> out;
    out.reserve(static_cast<size_t>(f->size));
    for (long long i = 0; i < f->size; ++i) out.push_back(element_at(f, i));
    return out;
}

FieldElement frobenius(const FieldElement& e) { return e.pow(e.field()->p); }

FieldElement Embedding::operator()(const FieldElement& e) const {
    if (!same_field(e.field(), src_))
        fail(ErrorKind::FieldMismatch, "embedding applied to element of a different field");
    FieldElement out = FieldElement::zero(dst_);
    for (size_t i = 0; i < e.coords().size(); ++i) {
        long long c = e.coords()[i];
        if (c == 0) continue;
        out = out + gen_powers_[i] * FieldElement::from_residue(dst_, c);
    }
    return out;
}

Embedding embed_field(const FieldPtr& src, const FieldPtr& dst) {
    if (src->p != dst->p) fail(ErrorKind::NoEmbedding, "different characteristics");
    if (dst->k % src->k != 0)
        fail(ErrorKind::NoEmbedding, "source degree does not divide destination degree");
    // First root of the source modulus in destination enumeration order.
    FieldElement root = FieldElement::zero(dst);
    bool found = false;
    for (long long idx = 0; idx < dst->size; ++idx) {
        FieldElement cand = element_at(dst, idx);
        FieldElement val = FieldElement::zero(dst);
        FieldElement cpow = FieldElement::one(dst);
        for (size_t i = 0; i < src->modulus.size(); ++i) {
            if (i > 0) cpow = cpow * cand;
            val = val + cpow * FieldElement::from_residue(dst, src->modulus[i]);
        }
        if (val.is_zero()) {
            root = cand;
            found = true;
            break;
        }
    }
    if (!found) fail(ErrorKind::NoEmbedding, "source modulus has no root in destination");
    std::vector<FieldElement> powers;
    powers.reserve(static_cast<size_t>(src->k));
    FieldElement rpow = FieldElement::one(dst);
    for (int i = 0; i < src->k; ++i) {
        if (i > 0) rpow = rpow * root;
        powers.push_back(rpow);
    }
    return Embedding(src, dst, std::move(powers));
}

FieldElement evaluate_at(const Polynomial& f, const FieldPtr& K,
                         const std::vector<FieldElement>& values,
                         const std::vector<int>& ambient) {
    if (f.tag().is_rationals() || f.tag().p != K->p)
        fail(ErrorKind::FieldMismatch, "polynomial characteristic differs from the field");
    if (values.size() != ambient.size())
        fail(ErrorKind::ArityError, "point arity does not match ambient arity");
    std::map<int, size_t> pos;
    for (size_t i = 0; i < ambient.size(); ++i) pos[ambient[i]] = i;
    for (int v : f.vars_used())
        if (pos.find(v) == pos.end())
            fail(ErrorKind::ArityError, "no value supplied for a used variable");
    FieldElement total = FieldElement::zero(K);
    for (const auto& [m, c] : f.terms()) {
        FieldElement term = FieldElement::from_residue(K, c.residue());
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) term = term * values[pos[static_cast<int>(i)]].pow(m[i]);
        total = total + term;
    }
    return total;
}

}  // namespace k0calc
