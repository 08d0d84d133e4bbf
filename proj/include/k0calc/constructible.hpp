// constructible.hpp: constructible sets as finite unions of locally closed
// cells {f1 = ... = fr = 0, g != 0}, with Boolean algebra, products,
// disjointification, and exhaustive point enumeration.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "k0calc/gf.hpp"
#include "k0calc/poly.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// The inequation side is kept factored: the cell's single inequation is the
// product of `factors` (1 when empty). Keeping the factor list lets Boolean
// operations and class normalization treat {f*g != 0} and {f != 0, g != 0}
// identically. Equations and factors are normalized defining polynomials,
// deduplicated and sorted.
struct Cell {
    std::vector<Polynomial> equations;
    std::vector<Polynomial> factors;

    Polynomial inequation(FieldTag tag) const;  // product of factors
    bool is_full() const { return equations.empty() && factors.empty(); }
    std::string to_string(const Session& s) const;  // {f1=0, ..., fr=0 ; g != 0}
};

// Canonical form; nullopt when the cell is syntactically empty (an equation is
// a nonzero constant, a factor is zero, or an equation is also a factor).
std::optional<Cell> normalize_cell(FieldTag tag, std::vector<Polynomial> equations,
                                   std::vector<Polynomial> factors);

int cell_cmp(const Cell& a, const Cell& b);

struct ConstructibleSet {
    FieldTag tag;
    std::vector<int> ambient;  // session variable indices, in ambient order
    std::vector<Cell> cells;   // deduplicated, sorted; empty = empty set

    bool is_syntactically_empty() const { return cells.empty(); }
};

ConstructibleSet empty_set(FieldTag tag, std::vector<int> ambient);
ConstructibleSet full_space(FieldTag tag, std::vector<int> ambient);
// Sorts, deduplicates, and drops syntactically empty cells.
ConstructibleSet make_set(FieldTag tag, std::vector<int> ambient, std::vector<Cell> cells);

bool same_ambient(const ConstructibleSet& a, const ConstructibleSet& b);

ConstructibleSet intersect(const ConstructibleSet& a, const ConstructibleSet& b);
ConstructibleSet set_union(const ConstructibleSet& a, const ConstructibleSet& b);
// Negates the defining formula and reconverts to cells over the same ambient.
ConstructibleSet complement(Session& s, const ConstructibleSet& a);
ConstructibleSet difference(Session& s, const ConstructibleSet& a, const ConstructibleSet& b);
// Ambient variables of b that collide with a's are renamed with fresh suffixed
// session variables before the ambients are concatenated.
ConstructibleSet product(Session& s, const ConstructibleSet& a, const ConstructibleSet& b);

// Left-to-right refinement: cell_i minus the union of the preceding cells,
// expanded into pairwise disjoint pieces. Union is unchanged.
ConstructibleSet disjointify(const ConstructibleSet& a);

// Exhaustive enumeration over field^ambient, lexicographic in the coordinate
// enumeration order; each point listed once. Requires a finite-characteristic
// session matching the field and size^|ambient| within the session budget.
std::vector<std::vector<FieldElement>> points_over(const Session& s, const ConstructibleSet& a,
                                                   const FieldPtr& field);

// True iff a has no points over the algebraically closed extension; decided by
// quantifier elimination on the existential closure (defined with the qe code).
bool is_empty(Session& s, const ConstructibleSet& a);

}  // namespace k0calc
