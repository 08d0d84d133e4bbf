// session.hpp: computation context: base field tag, variable table, resource limits.
#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "k0calc/error.hpp"

namespace k0calc {

// Base field of a session: F_p for a prime p <= 97, or the rationals when p == 0.
// The rationals stand in for an algebraically closed field of characteristic zero:
// every primitive here is characteristic-only, so exact rational arithmetic suffices.
struct FieldTag {
    long long p = 0;

    bool is_rationals() const { return p == 0; }
    bool operator==(const FieldTag& o) const { return p == o.p; }
    bool operator!=(const FieldTag& o) const { return p != o.p; }
};

bool is_small_prime(long long p);  // primality for the supported range only

struct SessionLimits {
    int max_ext = 3;                 // extension degrees probed by default (K)
    long long budget = 10'000'000;   // point-enumeration budget per counting call
    int rewrite_depth = 3;           // certificate rewrite search depth
};

// A Session owns the variable name table. Indices are stable for its lifetime and
// declaration order fixes the monomial order: earlier variables sort higher.
class Session {
  public:
    explicit Session(FieldTag tag, int base_deg = 1) : tag_(tag), base_deg_(base_deg) {
        if (tag.p != 0 && !is_small_prime(tag.p))
            fail(ErrorKind::FieldMismatch,
                 "characteristic must be 0 or a prime <= 97, got " + std::to_string(tag.p));
        if (base_deg < 1) fail(ErrorKind::DegenerateInput, "base extension degree must be >= 1");
    }

    FieldTag tag() const { return tag_; }
    int base_deg() const { return base_deg_; }
    void set_base_deg(int d) {
        if (d < 1) fail(ErrorKind::DegenerateInput, "base extension degree must be >= 1");
        base_deg_ = d;
    }

    SessionLimits& limits() { return limits_; }
    const SessionLimits& limits() const { return limits_; }

    // Declares name if absent; returns its index either way.
    int declare_var(const std::string& name);
    // Index of name, or -1 when not declared.
    int find_var(const std::string& name) const;
    // First of base, base2, base3, ... not yet declared; declares and returns it.
    int fresh_var(const std::string& base);

    const std::string& var_name(int idx) const;
    int var_count() const { return static_cast<int>(vars_.size()); }

    // Memo for realization counts, keyed by serialized cell symbol and extension degree.
    std::map<std::string, mpq_class>& count_memo() const { return count_memo_; }

  private:
    FieldTag tag_;
    int base_deg_;
    SessionLimits limits_;
    std::vector<std::string> vars_;
    std::map<std::string, int> var_index_;
    mutable std::map<std::string, mpq_class> count_memo_;
};

}  // namespace k0calc
