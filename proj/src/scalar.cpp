#include "k0calc/scalar.hpp"

namespace k0calc {

namespace {

void check_same_tag(const Scalar& a, const Scalar& b) {
    if (a.tag() != b.tag())
        fail(ErrorKind::FieldMismatch, "scalar arithmetic across different base fields");
}

}  // namespace

Scalar Scalar::from_int(FieldTag tag, long long v) {
    Scalar s(tag);
    if (tag.is_rationals()) {
        s.q_ = static_cast<long>(v);
    } else {
        s.r_ = ((v % tag.p) + tag.p) % tag.p;
    }
    return s;
}

Scalar Scalar::from_mpz(FieldTag tag, const mpz_class& v) {
    Scalar s(tag);
    if (tag.is_rationals()) {
        s.q_ = v;
    } else {
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(tag.p));
        s.r_ = r.get_si();
    }
    return s;
}

Scalar Scalar::from_mpq(FieldTag tag, const mpq_class& v) {
    if (!tag.is_rationals())
        fail(ErrorKind::FieldMismatch, "rational scalar constant in finite characteristic");
    Scalar s(tag);
    s.q_ = v;
    return s;
}

bool Scalar::is_zero() const { return tag_.is_rationals() ? sgn(q_) == 0 : r_ == 0; }

bool Scalar::is_one() const { return tag_.is_rationals() ? q_ == 1 : r_ == 1; }

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_tag(*this, o);
    Scalar s(tag_);
    if (tag_.is_rationals())
        s.q_ = q_ + o.q_;
    else
        s.r_ = (r_ + o.r_) % tag_.p;
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_tag(*this, o);
    Scalar s(tag_);
    if (tag_.is_rationals())
        s.q_ = q_ - o.q_;
    else
        s.r_ = ((r_ - o.r_) % tag_.p + tag_.p) % tag_.p;
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_tag(*this, o);
    Scalar s(tag_);
    if (tag_.is_rationals())
        s.q_ = q_ * o.q_;
    else
        s.r_ = (r_ * o.r_) % tag_.p;
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s(tag_);
    if (tag_.is_rationals())
        s.q_ = -q_;
    else
        s.r_ = (tag_.p - r_) % tag_.p;
    return s;
}

Scalar Scalar::inverse() const {
    if (is_zero()) fail(ErrorKind::DegenerateInput, "inverse of zero");
    Scalar s(tag_);
    if (tag_.is_rationals()) {
        s.q_ = 1 / q_;
    } else {
        s = pow(static_cast<unsigned long long>(tag_.p - 2));  // Fermat, p prime
    }
    return s;
}

Scalar Scalar::pow(unsigned long long e) const {
    Scalar acc = one(tag_);
    Scalar base = *this;
    while (e > 0) {
        if (e & 1ULL) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

int Scalar::cmp(const Scalar& a, const Scalar& b) {
    check_same_tag(a, b);
    if (a.tag_.is_rationals()) return ::cmp(a.q_, b.q_) < 0 ? -1 : (a.q_ == b.q_ ? 0 : 1);
    return a.r_ < b.r_ ? -1 : (a.r_ == b.r_ ? 0 : 1);
}

long long Scalar::residue() const {
    if (tag_.is_rationals()) fail(ErrorKind::FieldMismatch, "residue of a rational scalar");
    return r_;
}

const mpq_class& Scalar::rational() const {
    if (!tag_.is_rationals()) fail(ErrorKind::FieldMismatch, "rational view of a residue scalar");
    return q_;
}

std::string Scalar::to_string() const {
    return tag_.is_rationals() ? q_.get_str() : std::to_string(r_);
}

}  // namespace k0calc
