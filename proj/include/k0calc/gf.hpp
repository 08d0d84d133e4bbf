// gf.hpp: finite extension fields F_{p^k}: arithmetic, enumeration, Frobenius,
// embeddings, and extension-field evaluation of polynomials.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "k0calc/poly.hpp"

namespace k0calc {

// modulus holds ascending coefficients of a monic degree-k irreducible over F_p,
// chosen as the first irreducible in lexicographic order on coefficient vectors
// read from the constant term up. Degree-1 convention: modulus = x.
struct ExtensionField {
    long long p;
    int k;
    std::vector<long long> modulus;  // size k+1, modulus[k] == 1
    long long size;                  // p^k
};

using FieldPtr = std::shared_ptr<const ExtensionField>;

// Deterministic and cached: repeated calls return the identical field object.
// Bounds: p prime <= 97, k >= 1, p^k <= 2^20; violations raise SizeLimit.
FieldPtr build_field(long long p, int k);

bool same_field(const FieldPtr& a, const FieldPtr& b);

class FieldElement {
  public:
    FieldElement(FieldPtr field, std::vector<long long> coords);

    static FieldElement zero(const FieldPtr& f);
    static FieldElement one(const FieldPtr& f);
    static FieldElement from_residue(const FieldPtr& f, long long r);  // F_p inclusion

    const FieldPtr& field() const { return field_; }
    const std::vector<long long>& coords() const { return coords_; }
    bool is_zero() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement pow(long long e) const;  // e >= 0
    FieldElement inverse() const;         // DegenerateInput on zero

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    std::string to_string() const;  // coordinate vector [c0,...,c_{k-1}]

  private:
    FieldPtr field_;
    std::vector<long long> coords_;  // size k, entries in [0, p)
};

// Element whose coordinate vector is the base-p expansion of index (c0 least
// significant); element_index inverts it. The enumeration order of the field is
// element_at(f, 0), element_at(f, 1), ...
FieldElement element_at(const FieldPtr& f, long long index);
long long element_index(const FieldElement& e);
std::vector<FieldElement> enumerate_field(const FieldPtr& f);

FieldElement frobenius(const FieldElement& e);  // e^p

// Field homomorphism fixing F_p; the source generator maps to the first root of
// the source modulus in the destination's enumeration order.
class Embedding {
  public:
    Embedding(FieldPtr src, FieldPtr dst, std::vector<FieldElement> gen_powers)
        : src_(std::move(src)), dst_(std::move(dst)), gen_powers_(std::move(gen_powers)) {}

    const FieldPtr& src() const { return src_; }
    const FieldPtr& dst() const { return dst_; }
    FieldElement operator()(const FieldElement& e) const;

  private:
    FieldPtr src_;
    FieldPtr dst_;
    std::vector<FieldElement> gen_powers_;  // images of 1, alpha, ..., alpha^(k-1)
};

// Requires src.k | dst.k (and equal p); NoEmbedding otherwise.
Embedding embed_field(const FieldPtr& src, const FieldPtr& dst);

// Evaluation of a finite-characteristic polynomial at a point with coordinates
// in an extension field; values[i] is the value of ambient[i]. Used variables
// must all appear in ambient (ArityError); tag characteristic must match the
// field (FieldMismatch).
FieldElement evaluate_at(const Polynomial& f, const FieldPtr& K,
                         const std::vector<FieldElement>& values,
                         const std::vector<int>& ambient);

}  // namespace k0calc
