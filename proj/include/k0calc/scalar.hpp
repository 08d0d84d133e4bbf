// scalar.hpp: exact field coefficients: residues mod a small prime, or rationals.
#pragma once

#include <gmpxx.h>

#include <string>

#include "k0calc/error.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// Residues are kept in [0, p); p <= 97 so all intermediate products fit in long long.
class Scalar {
  public:
    explicit Scalar(FieldTag tag) : tag_(tag), r_(0), q_(0) {}

    static Scalar from_int(FieldTag tag, long long v);
    static Scalar from_mpz(FieldTag tag, const mpz_class& v);
    static Scalar from_mpq(FieldTag tag, const mpq_class& v);  // rationals only
    static Scalar zero(FieldTag tag) { return Scalar(tag); }
    static Scalar one(FieldTag tag) { return from_int(tag, 1); }

    FieldTag tag() const { return tag_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;  // DegenerateInput on zero
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }
    Scalar pow(unsigned long long e) const;

    bool operator==(const Scalar& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const Scalar& o) const { return cmp(*this, o) != 0; }

    // Total order used for canonical forms; mixing tags is a FieldMismatch.
    static int cmp(const Scalar& a, const Scalar& b);

    long long residue() const;          // only valid over F_p
    const mpq_class& rational() const;  // only valid over the rationals

    std::string to_string() const;

  private:
    FieldTag tag_;
    long long r_;  // used when tag_.p != 0
    mpq_class q_;  // used when tag_.p == 0
};

}  // namespace k0calc
