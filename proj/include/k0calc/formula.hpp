// formula.hpp: first-order formulas over the ring language: AST, parser,
// printer, substitution, and conversion of quantifier-free formulas to cells.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "k0calc/constructible.hpp"
#include "k0calc/poly.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

enum class FKind { Atom, Not, And, Or, Exists, ForAll };

// Immutable value tree. Atoms are `poly = 0`; an inequation is Not(Atom).
// Invariant maintained by the parser and the internal builders: bound variables
// are distinct from each other and from the free variables of the formula.
class Formula {
  public:
    static Formula atom(Polynomial p);
    static Formula negation(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula exists(int var, Formula body);
    static Formula forall(int var, Formula body);

    // Convenience folds; empty input yields the true atom / false atom.
    static Formula conj_all(FieldTag tag, std::vector<Formula> fs);
    static Formula disj_all(FieldTag tag, std::vector<Formula> fs);

    FKind kind() const { return kind_; }
    FieldTag tag() const { return tag_; }
    const Polynomial& atom_poly() const;
    const Formula& child(size_t i = 0) const;
    size_t child_count() const { return kids_.size(); }
    int quant_var() const;

    bool is_quantifier_free() const;
    static bool equal(const Formula& a, const Formula& b);

  private:
    Formula(FKind kind, FieldTag tag) : kind_(kind), tag_(tag) {}

    FKind kind_;
    FieldTag tag_;
    std::vector<Polynomial> atom_;  // size 1 for Atom
    std::vector<Formula> kids_;
    int qvar_ = -1;
};

// Free variables in ascending session-index order. The parser declares free
// names in textual first-occurrence order, so for freshly parsed input this is
// the first-occurrence order, which fixes the ambient coordinates.
std::vector<int> free_vars(const Formula& f);
std::vector<int> bound_vars(const Formula& f);

// Grammar (quantifiers reserve the identifiers E and A):
//   formula := quant | or
//   quant   := ("E" | "A") ident "." formula
//   or      := and { "|" and }
//   and     := lit { "&" lit }
//   lit     := "!" lit | "(" formula ")" | poly ("=" | "!=") poly
//   poly    := ["-"] term { ("+" | "-") term }
//   term    := factor { "*" factor }
//   factor  := (ident | integer) [ "^" integer ]
// Free variables are declared in the session in first-occurrence order; bound
// variables are renamed (suffix 2, 3, ...) only when they collide with the
// formula's free variables or a previously chosen bound name, which makes
// parsing idempotent against pretty_print.
Formula parse_formula(Session& s, const std::string& text);

// Parse plus the textual first-occurrence order of the free variables, which
// may be wider than free_vars(formula): in "x = x" the occurrences of x fix a
// one-variable ambient even though the atom polynomial cancels to zero.
struct ParsedFormula {
    Formula formula;
    std::vector<int> free_order;
};
ParsedFormula parse_formula_with_ambient(Session& s, const std::string& text);

// Canonical text; parse_formula(pretty_print(f)) is structurally f.
std::string pretty_print(const Session& s, const Formula& f);

// Capture-avoiding; substituting a variable bound in f is a BoundVarError.
Formula substitute(Session& s, const Formula& f, int var, const Polynomial& value);

// Quantifier-free formulas only: negation normal form, then disjunctive normal
// form, each disjunct a locally closed cell. Ambient = free_vars(f).
ConstructibleSet to_cells(Session& s, const Formula& f);
// Same with an explicit ambient, which must contain every free variable.
ConstructibleSet to_cells_with_ambient(Session& s, const Formula& f, std::vector<int> ambient);

// Defining formula of a set: disjunction of cell conjunctions over the same
// ambient. Empty set prints as the false atom 1 = 0.
Formula cells_to_formula(const ConstructibleSet& a);

}  // namespace k0calc
