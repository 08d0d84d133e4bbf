#include "k0calc/constructible.hpp"

#include <algorithm>

#include "k0calc/formula.hpp"

namespace k0calc {

Polynomial Cell::inequation(FieldTag tag) const {
    Polynomial out = Polynomial::constant(tag, 1);
    for (const Polynomial& g : factors) out = out * g;
    return out;
}

std::string Cell::to_string(const Session& s) const {
    std::string out = "{";
    for (size_t i = 0; i < equations.size(); ++i) {
        if (i > 0) out += ", ";
        out += equations[i].to_string(s) + " = 0";
    }
    out += " ; " + inequation(s.tag()).to_string(s) + " != 0}";
    return out;
}

std::optional<Cell> normalize_cell(FieldTag tag, std::vector<Polynomial> equations,
                                   std::vector<Polynomial> factors) {
    Cell c;
    for (Polynomial& e : equations) {
        if (e.is_zero()) continue;  // 0 = 0 is vacuous
        if (e.is_constant()) return std::nullopt;  // nonzero constant = 0 is absurd
        c.equations.push_back(normalize_defining_poly(e));
    }
    for (Polynomial& g : factors) {
        if (g.is_zero()) return std::nullopt;  // 0 != 0 is absurd
        if (g.is_constant()) continue;         // nonzero constant != 0 is vacuous
        c.factors.push_back(normalize_defining_poly(g));
    }
    auto poly_less = [](const Polynomial& a, const Polynomial& b) {
        return Polynomial::cmp(a, b) < 0;
    };
    auto poly_eq = [](const Polynomial& a, const Polynomial& b) {
        return Polynomial::cmp(a, b) == 0;
    };
    std::sort(c.equations.begin(), c.equations.end(), poly_less);
    c.equations.erase(std::unique(c.equations.begin(), c.equations.end(), poly_eq),
                      c.equations.end());
    std::sort(c.factors.begin(), c.factors.end(), poly_less);
    c.factors.erase(std::unique(c.factors.begin(), c.factors.end(), poly_eq), c.factors.end());
    for (const Polynomial& g : c.factors)
        for (const Polynomial& e : c.equations)
            if (Polynomial::cmp(g, e) == 0) return std::nullopt;  // f = 0 and f != 0
    (void)tag;
    return c;
}

namespace {

int poly_list_cmp(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = Polynomial::cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

}  // namespace

int cell_cmp(const Cell& a, const Cell& b) {
    // Fewer constraints first, so that left-to-right disjointification sees a
    // cell before any of its refinements and absorbs them syntactically.
    if (a.equations.size() != b.equations.size())
        return a.equations.size() < b.equations.size() ? -1 : 1;
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size() ? -1 : 1;
    int c = poly_list_cmp(a.equations, b.equations);
    if (c != 0) return c;
    return poly_list_cmp(a.factors, b.factors);
}

ConstructibleSet empty_set(FieldTag tag, std::vector<int> ambient) {
    return ConstructibleSet{tag, std::move(ambient), {}};
}

ConstructibleSet full_space(FieldTag tag, std::vector<int> ambient) {
    return ConstructibleSet{tag, std::move(ambient), {Cell{}}};
}

ConstructibleSet make_set(FieldTag tag, std::vector<int> ambient, std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end(),
              [](const Cell& a, const Cell& b) { return cell_cmp(a, b) < 0; });
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const Cell& a, const Cell& b) { return cell_cmp(a, b) == 0; }),
                cells.end());
    return ConstructibleSet{tag, std::move(ambient), std::move(cells)};
}

bool same_ambient(const ConstructibleSet& a, const ConstructibleSet& b) {
    return a.tag == b.tag && a.ambient == b.ambient;
}

namespace {

void check_same_ambient(const ConstructibleSet& a, const ConstructibleSet& b) {
    if (!same_ambient(a, b))
        fail(ErrorKind::AmbientError, "operands live in different ambient spaces");
}

std::vector<Polynomial> concat(std::vector<Polynomial> a, const std::vector<Polynomial>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

ConstructibleSet intersect(const ConstructibleSet& a, const ConstructibleSet& b) {
    check_same_ambient(a, b);
    std::vector<Cell> cells;
    for (const Cell& ca : a.cells)
        for (const Cell& cb : b.cells) {
            std::optional<Cell> c = normalize_cell(a.tag, concat(ca.equations, cb.equations),
                                                   concat(ca.factors, cb.factors));
            if (c) cells.push_back(std::move(*c));
        }
    return make_set(a.tag, a.ambient, std::move(cells));
}

ConstructibleSet set_union(const ConstructibleSet& a, const ConstructibleSet& b) {
    check_same_ambient(a, b);
    std::vector<Cell> cells = a.cells;
    cells.insert(cells.end(), b.cells.begin(), b.cells.end());
    return make_set(a.tag, a.ambient, std::move(cells));
}

ConstructibleSet complement(Session& s, const ConstructibleSet& a) {
    Formula negated = Formula::negation(cells_to_formula(a));
    return to_cells_with_ambient(s, negated, a.ambient);
}

ConstructibleSet difference(Session& s, const ConstructibleSet& a, const ConstructibleSet& b) {
    return intersect(a, complement(s, b));
}

ConstructibleSet product(Session& s, const ConstructibleSet& a, const ConstructibleSet& b) {
    if (a.tag != b.tag) fail(ErrorKind::FieldMismatch, "product across base fields");
    ConstructibleSet rb = b;
    for (int& v : rb.ambient) {
        if (std::find(a.ambient.begin(), a.ambient.end(), v) == a.ambient.end()) continue;
        int fresh = s.fresh_var(s.var_name(v));
        Polynomial repl = Polynomial::variable(a.tag, fresh);
        for (Cell& c : rb.cells) {
            for (Polynomial& e : c.equations) e = e.substitute(v, repl);
            for (Polynomial& g : c.factors) g = g.substitute(v, repl);
        }
        v = fresh;
    }
    std::vector<int> ambient = a.ambient;
    ambient.insert(ambient.end(), rb.ambient.begin(), rb.ambient.end());
    std::vector<Cell> cells;
    for (const Cell& ca : a.cells)
        for (const Cell& cb : rb.cells) {
            std::optional<Cell> c = normalize_cell(a.tag, concat(ca.equations, cb.equations),
                                                   concat(ca.factors, cb.factors));
            if (c) cells.push_back(std::move(*c));
        }
    return make_set(a.tag, std::move(ambient), std::move(cells));
}

namespace {

// c minus d as pairwise disjoint cells: negate d's conditions one at a time,
// keeping the previously negated ones satisfied.
std::vector<Cell> cell_minus(FieldTag tag, const Cell& c, const Cell& d) {
    std::vector<Cell> out;
    std::vector<Polynomial> prefix_eqs, prefix_factors;
    for (const Polynomial& e : d.equations) {
        std::optional<Cell> piece =
            normalize_cell(tag, concat(c.equations, prefix_eqs),
                           concat(concat(c.factors, prefix_factors), {e}));
        if (piece) out.push_back(std::move(*piece));
        prefix_eqs.push_back(e);
    }
    for (const Polynomial& g : d.factors) {
        std::optional<Cell> piece =
            normalize_cell(tag, concat(concat(c.equations, prefix_eqs), {g}),
                           concat(c.factors, prefix_factors));
        if (piece) out.push_back(std::move(*piece));
        prefix_factors.push_back(g);
    }
    return out;
}

}  // namespace

ConstructibleSet disjointify(const ConstructibleSet& a) {
    std::vector<Cell> out;
    for (size_t i = 0; i < a.cells.size(); ++i) {
        std::vector<Cell> pieces = {a.cells[i]};
        for (size_t j = 0; j < i; ++j) {
            std::vector<Cell> next;
            for (const Cell& piece : pieces) {
                std::vector<Cell> remains = cell_minus(a.tag, piece, a.cells[j]);
                next.insert(next.end(), remains.begin(), remains.end());
            }
            pieces = std::move(next);
        }
        out.insert(out.end(), pieces.begin(), pieces.end());
    }
    // Pieces are pairwise disjoint by construction; do not re-sort them into
    // make_set dedup (identical-looking pieces cannot arise from disjoint
    // refinement, but keep canonical order for determinism).
    std::sort(out.begin(), out.end(),
              [](const Cell& x, const Cell& y) { return cell_cmp(x, y) < 0; });
    return ConstructibleSet{a.tag, a.ambient, std::move(out)};
}

std::vector<std::vector<FieldElement>> points_over(const Session& s, const ConstructibleSet& a,
                                                   const FieldPtr& field) {
    if (s.tag().is_rationals())
        fail(ErrorKind::CharZeroUnsupported, "point enumeration needs finite characteristic");
    if (s.tag().p != field->p)
        fail(ErrorKind::FieldMismatch, "field characteristic differs from the session");
    size_t n = a.ambient.size();
    long long budget = s.limits().budget;
    long long total = 1;
    for (size_t i = 0; i < n; ++i) {
        if (total > budget / field->size)
            fail(ErrorKind::SizeLimit, "enumeration budget exceeded");
        total *= field->size;
    }
    std::vector<std::vector<FieldElement>> out;
    if (a.cells.empty()) return out;

    std::vector<long long> idx(n, 0);
    std::vector<FieldElement> point(n, FieldElement::zero(field));
    while (true) {
        for (size_t i = 0; i < n; ++i) point[i] = element_at(field, idx[i]);
        bool member = false;
        for (const Cell& c : a.cells) {
            bool ok = true;
            for (const Polynomial& e : c.equations)
                if (!evaluate_at(e, field, point, a.ambient).is_zero()) {
                    ok = false;
                    break;
                }
            if (ok)
                for (const Polynomial& g : c.factors)
                    if (evaluate_at(g, field, point, a.ambient).is_zero()) {
                        ok = false;
                        break;
                    }
            if (ok) {
                member = true;
                break;
            }
        }
        if (member) out.push_back(point);
        // lexicographic order: last coordinate advances fastest
        size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < field->size) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (n == 0) return out;
    }
}

}  // namespace k0calc
