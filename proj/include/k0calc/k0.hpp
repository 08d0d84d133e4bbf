// k0.hpp: ring elements over canonical cell symbols with Lefschetz-class
// shifts, scissor-relation normalization, verified definable-bijection
// certificates, and the sound-but-incomplete equality trichotomy.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k0calc/constructible.hpp"
#include "k0calc/formula.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// A cell over positional coordinates 0..nvars-1, detached from any session
// variable table. Symbols produced by canonicalize_cell are terminal: no
// unconstrained coordinate, no equation of degree 1 in any coordinate.
struct CellSymbol {
    int nvars = 0;
    Cell cell;
};

int symbol_cmp(const CellSymbol& a, const CellSymbol& b);
// Positional rendering with coordinates x1..xn; doubles as the stable key.
std::string symbol_to_string(const CellSymbol& s);

// Scissor/solve normal form of a positional cell: unconstrained coordinates
// become Lefschetz shifts, degree-1 equations are solved (splitting on a
// non-constant leading coefficient), and the surviving pieces are emitted as
// terminal symbols with their accumulated shifts. Each piece has coefficient
// +1: the split pieces are disjoint, so this is the scissor decomposition.
std::vector<std::pair<CellSymbol, long long>> canonicalize_cell(FieldTag tag, int nvars,
                                                                const Cell& cell);

class K0Element {
  public:
    explicit K0Element(FieldTag tag) : tag_(tag) {}

    static K0Element zero(FieldTag tag) { return K0Element(tag); }
    static K0Element one(FieldTag tag);        // class of a point
    static K0Element lefschetz(FieldTag tag);  // class of the affine line

    FieldTag tag() const { return tag_; }
    bool is_zero() const { return terms_.empty(); }

    struct Term {
        CellSymbol symbol;
        long long shift;  // Lefschetz exponent; negative in the localization
        long long coeff;
    };
    std::vector<Term> terms() const;

    void absorb(const CellSymbol& sym, long long shift, long long coeff);

  private:
    FieldTag tag_;
    // key: symbol rendering + shift; value: symbol and its coefficient
    std::map<std::pair<std::string, long long>, std::pair<CellSymbol, long long>> terms_;
};

K0Element add(const K0Element& a, const K0Element& b);
K0Element sub(const K0Element& a, const K0Element& b);
K0Element neg(const K0Element& a);
K0Element scale(const K0Element& a, long long c);
K0Element mul(const K0Element& a, const K0Element& b);
K0Element lshift(const K0Element& a, long long e);  // multiply by Lefschetz^e

// Disjointify, canonicalize each piece, and sum the resulting symbols.
K0Element class_of(const ConstructibleSet& a);

// Inclusion-exclusion expansion into closed (equation-only) symbols: the
// factor list of each term is expanded over its subsets with alternating
// signs, and every resulting closed cell is re-canonicalized. Two elements
// built from the same polynomial family get identical vectors exactly when
// the free-boolean-algebra combination matches, which makes the zero test a
// sound equality certificate.
std::map<std::string, long long> closed_vector(const K0Element& a);

struct BijectionCertificate {
    std::string source_text, target_text, graph_text;
    ConstructibleSet source, target, graph;
    K0Element source_class, target_class;
    std::string hash;  // integrity hash of the three formula texts
    bool verified = false;
};

// Integrity hash for registry records (FNV-1a over the three texts).
std::string certificate_hash(const std::string& phi, const std::string& psi,
                             const std::string& eta);

class CertificateRegistry {
  public:
    // Only verified certificates may enter; append-only.
    void append(BijectionCertificate cert);
    const std::vector<BijectionCertificate>& certificates() const { return certs_; }

    // JSON-lines persistence. Loading re-verifies every record in the given
    // session and rejects hash mismatches (RegistryError).
    static CertificateRegistry load(Session& s, const std::string& path);
    void save(const std::string& path) const;

  private:
    std::vector<BijectionCertificate> certs_;
};

// Verifies that eta is the graph of a bijection from the points of phi onto
// the points of psi over every algebraically closed extension, by deciding
// three sentences: totality+functionality (each source point has exactly one
// image), injectivity, and surjectivity+graph-membership. On success the
// certificate is appended to the registry; on failure NotABijection names the
// failing sentence. Precondition: free variables of eta are the disjoint
// union of those of phi and psi (ArityError).
BijectionCertificate register_bijection(Session& s, const Formula& phi, const Formula& psi,
                                        const Formula& eta, CertificateRegistry& registry);

enum class Verdict { Equal, Distinct, Unknown };
const char* verdict_name(Verdict v);

struct CompareOutcome {
    Verdict verdict = Verdict::Unknown;
    int witness_k = 0;       // least separating extension degree when Distinct
    int rewrite_steps = -1;  // certificate applications used when Equal
};

// Equality half of compare: breadth-first search over signed certificate
// rewrites (each step adds or subtracts one certificate's source-target
// difference), testing the closed vector for zero; at most depth steps.
std::optional<int> rewrite_distance_to_zero(const K0Element& diff, const CertificateRegistry& reg,
                                            int depth);

// Trichotomy: Equal via rewrite_distance_to_zero; Distinct via point counts
// differing at some extension degree k <= limits().max_ext (characteristic p
// only); Unknown otherwise. Both verdicts are sound, neither is complete.
// Defined with the realization module, which supplies the counting.
CompareOutcome compare(Session& s, const K0Element& a, const K0Element& b,
                       const CertificateRegistry& registry);

// Reinterprets a class over the degree-m extension of the base field: the
// defining cells are unchanged; only the counting convention moves (pair with
// a Session whose base_deg is m).
K0Element base_extend(const K0Element& a, int m);

}  // namespace k0calc
