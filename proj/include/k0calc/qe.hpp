// qe.hpp: quantifier elimination relative to algebraically closed fields and
// the sentence decision procedure built on it.
#pragma once

#include <string>
#include <vector>

#include "k0calc/constructible.hpp"
#include "k0calc/formula.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

// Audit tree of the elimination: leading-coefficient case splits, per-branch
// pseudo-remainder steps, and emitted leaf cells. Optional everywhere; pass
// nullptr to skip assembly.
struct TraceNode {
    std::string label;
    std::vector<TraceNode> children;
};

std::string trace_to_text(const TraceNode& t);  // indented, one label per line

// Projection along var: for every algebraically closed extension L, the points
// of the result over L are exactly the projections of c's points. Per cell:
// (a) no equations in var: some coefficient of the inequation is nonzero;
// (b) case split on the leading coefficient of a minimal-degree equation, with
//     pseudo-remainder reduction of the other constraints on the nonzero branch;
// (c) one equation f with unit lead against inequation g: solvable iff the
//     pseudo-remainder of g^deg(f) by f is nonzero, a disjunction over its
//     coefficients.
ConstructibleSet eliminate_exists(Session& s, const ConstructibleSet& c, int var,
                                  TraceNode* trace = nullptr);

// Innermost-first; universal quantifiers eliminate through the dual
// "not exists not". Quantifier-free input is returned unchanged.
Formula eliminate_all(Session& s, const Formula& f, TraceNode* trace = nullptr);

// Truth of a sentence over any (equivalently every) algebraically closed field
// containing the base field. Free variables raise NotASentence.
bool decide(Session& s, const Formula& sentence, TraceNode* trace = nullptr);

// decide of the universally closed biconditional; the formulas must have the
// same free-variable tuple (ArityError otherwise).
bool definably_equivalent(Session& s, const Formula& a, const Formula& b);

}  // namespace k0calc
