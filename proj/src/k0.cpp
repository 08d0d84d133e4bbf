#include "k0calc/k0.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "k0calc/error.hpp"
#include "k0calc/qe.hpp"

namespace k0calc {

namespace {

std::string positional_name(int i) { return "x" + std::to_string(i + 1); }

int poly_list_cmp(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        int c = Polynomial::cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    return 0;
}

struct PendingCell {
    int nvars = 0;
    std::vector<Polynomial> equations;
    std::vector<Polynomial> factors;
    long long shift = 0;
};

// Componentwise minimum exponent vector over the terms: the largest monomial
// dividing every term. Empty means trivial content.
Monomial content_of(const Polynomial& g) {
    Monomial m;
    bool first = true;
    for (const auto& [mono, c] : g.terms()) {
        (void)c;
        if (first) {
            m = mono;
            first = false;
            continue;
        }
        if (mono.size() < m.size()) m.resize(mono.size());
        for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], mono[i]);
    }
    while (!m.empty() && m.back() == 0) m.pop_back();
    return m;
}

Polynomial monomial_poly(FieldTag tag, const Monomial& m) {
    Polynomial p = Polynomial::constant(tag, 1);
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) p = p * Polynomial::variable(tag, static_cast<int>(i), m[i]);
    return p;
}

// Divisibility reductions on a normalized cell. Point-set preserving:
//   - an equation divisible by another equation is redundant;
//   - an equation dividing a factor contradicts the factor (empty cell);
//   - an equation divisible by a factor is replaced by the exact quotient.
// Returns nullopt when the cell is recognized as empty. Each rewrite strictly
// shrinks an equation or removes one, so the fixpoint loop terminates.
// Fixpoint of three families of value-preserving rewrites on one cell:
//   - an equation exactly divisible by a factor is replaced by the quotient
//     (the factor is invertible on the cell);
//   - a factor is replaced by its remainder modulo an equation; remainder 0
//     empties the cell, a nonzero constant remainder drops the factor;
//   - an equation is replaced by its remainder modulo another equation;
//     remainder 0 drops it, a nonzero constant remainder proves the
//     equation system inconsistent, hence the cell empty.
// Each firing strictly shrinks the multiset of monomial multisets, so the
// loop terminates.
std::optional<Cell> reduce_by_divisibility(FieldTag tag, Cell cell) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < cell.equations.size() && !changed; ++i) {
            for (size_t j = 0; j < cell.factors.size(); ++j) {
                if (auto q = cell.equations[i].divided_by(cell.factors[j])) {
                    cell.equations[i] = std::move(*q);
                    changed = true;
                    break;
                }
                Polynomial r = cell.factors[j].reduced_mod(cell.equations[i]);
                if (r != cell.factors[j]) {
                    if (r.is_zero()) return std::nullopt;
                    if (r.is_constant())
                        cell.factors.erase(cell.factors.begin() +
                                           static_cast<std::ptrdiff_t>(j));
                    else
                        cell.factors[j] = std::move(r);
                    changed = true;
                    break;
                }
            }
            if (changed) break;
            for (size_t j = 0; j < cell.equations.size(); ++j) {
                if (i == j) continue;
                Polynomial r = cell.equations[j].reduced_mod(cell.equations[i]);
                if (r == cell.equations[j]) continue;
                if (r.is_zero()) {
                    cell.equations.erase(cell.equations.begin() +
                                         static_cast<std::ptrdiff_t>(j));
                } else if (r.is_constant()) {
                    return std::nullopt;
                } else {
                    cell.equations[static_cast<size_t>(j)] = std::move(r);
                }
                changed = true;
                break;
            }
        }
        if (changed) {
            auto norm = normalize_cell(tag, std::move(cell.equations), std::move(cell.factors));
            if (!norm) return std::nullopt;
            cell = std::move(*norm);
        }
    }
    return cell;
}

// Core normalization recursion. Every transformation below preserves the
// class of the cell as a sum of shifted cell classes:
//   - an unconstrained coordinate contributes one Lefschetz factor;
//   - a solved coordinate (degree-1 equation) projects bijectively away;
//   - a non-constant leading coefficient splits the cell into the disjoint
//     locus where it is invertible and the locus where it vanishes.
// Termination: (nvars, total monomial degree over equations and factors)
// drops lexicographically in every recursive call.
void canonicalize_rec(FieldTag tag, PendingCell pc,
                      std::vector<std::pair<CellSymbol, long long>>& out) {
    std::optional<Cell> pre = normalize_cell(tag, std::move(pc.equations), std::move(pc.factors));
    if (!pre) return;  // syntactically empty piece
    std::optional<Cell> norm = reduce_by_divisibility(tag, std::move(*pre));
    if (!norm) return;

    // A factor with monomial content is equivalent to its bare variables plus
    // the content-free cofactor: pure rewriting of the inequation side.
    {
        bool changed = false;
        std::vector<Polynomial> nf;
        for (const Polynomial& g : norm->factors) {
            const Monomial m = content_of(g);
            const unsigned mdeg = monomial_total_degree(m);
            const bool bare_variable = g.terms().size() == 1 && mdeg == 1;
            if (mdeg == 0 || bare_variable) {
                nf.push_back(g);
                continue;
            }
            changed = true;
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i] > 0) nf.push_back(Polynomial::variable(tag, static_cast<int>(i)));
            auto q = g.divided_by(monomial_poly(tag, m));
            if (q && !q->is_constant()) nf.push_back(std::move(*q));
        }
        if (changed) {
            PendingCell next{pc.nvars, norm->equations, std::move(nf), pc.shift};
            canonicalize_rec(tag, std::move(next), out);
            return;
        }
    }

    // An equation with monomial content m splits disjointly: either the
    // content vanishes, or it is invertible and the cofactor vanishes. Pure
    // monomial equations split on their first variable the same way.
    for (size_t i = 0; i < norm->equations.size(); ++i) {
        const Polynomial& e = norm->equations[i];
        const Monomial m = content_of(e);
        const unsigned mdeg = monomial_total_degree(m);
        if (mdeg == 0) continue;
        if (e.terms().size() == 1) {
            if (mdeg == 1) continue;  // a bare variable is already canonical
            size_t v = 0;
            while (m[v] == 0) ++v;
            Monomial rest = m;
            rest[v] = 0;
            while (!rest.empty() && rest.back() == 0) rest.pop_back();

            PendingCell at_zero{pc.nvars, norm->equations, norm->factors, pc.shift};
            at_zero.equations[i] = Polynomial::variable(tag, static_cast<int>(v));
            canonicalize_rec(tag, std::move(at_zero), out);

            PendingCell away{pc.nvars, norm->equations, norm->factors, pc.shift};
            away.equations[i] = monomial_poly(tag, rest);
            away.factors.push_back(Polynomial::variable(tag, static_cast<int>(v)));
            canonicalize_rec(tag, std::move(away), out);
        } else {
            const Polynomial content = monomial_poly(tag, m);
            PendingCell at_zero{pc.nvars, norm->equations, norm->factors, pc.shift};
            at_zero.equations[i] = content;
            canonicalize_rec(tag, std::move(at_zero), out);

            PendingCell away{pc.nvars, norm->equations, norm->factors, pc.shift};
            away.equations[i] = *e.divided_by(content);
            away.factors.push_back(content);
            canonicalize_rec(tag, std::move(away), out);
        }
        return;
    }

    // Unused coordinates: each is a full affine-line factor.
    std::vector<char> used(static_cast<size_t>(pc.nvars), 0);
    for (const Polynomial& p : norm->equations)
        for (int v : p.vars_used()) used[static_cast<size_t>(v)] = 1;
    for (const Polynomial& p : norm->factors)
        for (int v : p.vars_used()) used[static_cast<size_t>(v)] = 1;
    int nused = 0;
    std::vector<int> rank(static_cast<size_t>(pc.nvars), -1);
    for (int v = 0; v < pc.nvars; ++v)
        if (used[static_cast<size_t>(v)]) rank[static_cast<size_t>(v)] = nused++;
    if (nused < pc.nvars) {
        auto mapper = [&rank](int v) { return rank[static_cast<size_t>(v)]; };
        PendingCell next;
        next.nvars = nused;
        next.shift = pc.shift + (pc.nvars - nused);
        for (const Polynomial& p : norm->equations) next.equations.push_back(p.remap_vars(mapper));
        for (const Polynomial& p : norm->factors) next.factors.push_back(p.remap_vars(mapper));
        canonicalize_rec(tag, std::move(next), out);
        return;
    }

    // Pick a degree-1 equation: first coordinate-equation pair with a constant
    // leading coefficient if any, otherwise the first degree-1 pair at all.
    int sel_eq = -1, sel_var = -1;
    bool sel_const = false;
    for (int v = 0; v < pc.nvars && !sel_const; ++v) {
        for (size_t i = 0; i < norm->equations.size(); ++i) {
            if (norm->equations[i].degree_in(v) != 1) continue;
            bool cst = norm->equations[i].coefficient_of(v, 1).is_constant();
            if (sel_eq < 0) {
                sel_eq = static_cast<int>(i);
                sel_var = v;
            }
            if (cst) {
                sel_eq = static_cast<int>(i);
                sel_var = v;
                sel_const = true;
                break;
            }
        }
    }

    if (sel_eq < 0) {
        out.emplace_back(CellSymbol{pc.nvars, *norm}, pc.shift);
        return;
    }

    const int v = sel_var;
    const Polynomial f = norm->equations[static_cast<size_t>(sel_eq)];
    const Polynomial lc = f.coefficient_of(v, 1);  // v-free
    const Polynomial rest = f.coefficient_of(v, 0);
    auto drop_v = [v](int w) { return w < v ? w : w - 1; };

    if (sel_const) {
        // v = -rest/lc everywhere on the cell: substitute and project.
        const Polynomial value = rest.scaled(-(lc.constant_value().inverse()));
        PendingCell next;
        next.nvars = pc.nvars - 1;
        next.shift = pc.shift;
        for (size_t i = 0; i < norm->equations.size(); ++i) {
            if (static_cast<int>(i) == sel_eq) continue;
            next.equations.push_back(norm->equations[i].substitute(v, value).remap_vars(drop_v));
        }
        for (const Polynomial& g : norm->factors)
            next.factors.push_back(g.substitute(v, value).remap_vars(drop_v));
        canonicalize_rec(tag, std::move(next), out);
        return;
    }

    // Piece A: lc invertible; v = -rest/lc with denominators cleared.
    {
        const Polynomial neg_rest = -rest;
        PendingCell next;
        next.nvars = pc.nvars - 1;
        next.shift = pc.shift;
        for (size_t i = 0; i < norm->equations.size(); ++i) {
            if (static_cast<int>(i) == sel_eq) continue;
            next.equations.push_back(
                norm->equations[i].substitute_linear_cleared(v, neg_rest, lc).remap_vars(drop_v));
        }
        for (const Polynomial& g : norm->factors)
            next.factors.push_back(g.substitute_linear_cleared(v, neg_rest, lc).remap_vars(drop_v));
        next.factors.push_back(lc.remap_vars(drop_v));
        canonicalize_rec(tag, std::move(next), out);
    }
    // Piece B: lc vanishes; the equation degenerates to its constant part.
    {
        PendingCell next;
        next.nvars = pc.nvars;
        next.shift = pc.shift;
        for (size_t i = 0; i < norm->equations.size(); ++i) {
            if (static_cast<int>(i) == sel_eq) continue;
            next.equations.push_back(norm->equations[i]);
        }
        next.equations.push_back(lc);
        next.equations.push_back(rest);
        next.factors = norm->factors;
        canonicalize_rec(tag, std::move(next), out);
    }
}

}  // namespace

int symbol_cmp(const CellSymbol& a, const CellSymbol& b) {
    if (a.nvars != b.nvars) return a.nvars < b.nvars ? -1 : 1;
    return cell_cmp(a.cell, b.cell);
}

std::string symbol_to_string(const CellSymbol& s) {
    std::string out = "[" + std::to_string(s.nvars) + "]{";
    bool first = true;
    for (const Polynomial& p : s.cell.equations) {
        if (!first) out += ", ";
        out += p.to_string(positional_name) + " = 0";
        first = false;
    }
    if (!s.cell.factors.empty()) {
        out += " ; ";
        bool ff = true;
        for (const Polynomial& g : s.cell.factors) {
            if (!ff) out += " * ";
            out += "(" + g.to_string(positional_name) + ")";
            ff = false;
        }
        out += " != 0";
    }
    out += "}";
    return out;
}

std::vector<std::pair<CellSymbol, long long>> canonicalize_cell(FieldTag tag, int nvars,
                                                                const Cell& cell) {
    if (nvars < 0) fail(ErrorKind::DegenerateInput, "negative coordinate count");
    for (const Polynomial& p : cell.equations)
        for (int v : p.vars_used())
            if (v >= nvars) fail(ErrorKind::VarError, "cell polynomial escapes its coordinates");
    for (const Polynomial& p : cell.factors)
        for (int v : p.vars_used())
            if (v >= nvars) fail(ErrorKind::VarError, "cell polynomial escapes its coordinates");
    PendingCell pc;
    pc.nvars = nvars;
    pc.equations = cell.equations;
    pc.factors = cell.factors;
    std::vector<std::pair<CellSymbol, long long>> out;
    canonicalize_rec(tag, std::move(pc), out);
    return out;
}

K0Element K0Element::one(FieldTag tag) {
    K0Element e(tag);
    e.absorb(CellSymbol{}, 0, 1);
    return e;
}

K0Element K0Element::lefschetz(FieldTag tag) {
    K0Element e(tag);
    e.absorb(CellSymbol{}, 1, 1);
    return e;
}

std::vector<K0Element::Term> K0Element::terms() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [key, val] : terms_) out.push_back(Term{val.first, key.second, val.second});
    return out;
}

void K0Element::absorb(const CellSymbol& sym, long long shift, long long coeff) {
    if (coeff == 0) return;
    auto key = std::make_pair(symbol_to_string(sym), shift);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), std::make_pair(sym, coeff));
        return;
    }
    it->second.second += coeff;
    if (it->second.second == 0) terms_.erase(it);
}

K0Element add(const K0Element& a, const K0Element& b) {
    if (!(a.tag() == b.tag())) fail(ErrorKind::FieldMismatch, "classes over different base fields");
    K0Element out = a;
    for (const auto& t : b.terms()) out.absorb(t.symbol, t.shift, t.coeff);
    return out;
}

K0Element sub(const K0Element& a, const K0Element& b) { return add(a, neg(b)); }

K0Element neg(const K0Element& a) { return scale(a, -1); }

K0Element scale(const K0Element& a, long long c) {
    K0Element out(a.tag());
    for (const auto& t : a.terms()) out.absorb(t.symbol, t.shift, t.coeff * c);
    return out;
}

K0Element mul(const K0Element& a, const K0Element& b) {
    if (!(a.tag() == b.tag())) fail(ErrorKind::FieldMismatch, "classes over different base fields");
    K0Element out(a.tag());
    for (const auto& ta : a.terms()) {
        for (const auto& tb : b.terms()) {
            const int n1 = ta.symbol.nvars;
            Cell prod;
            prod.equations = ta.symbol.cell.equations;
            prod.factors = ta.symbol.cell.factors;
            auto lift = [n1](int v) { return v + n1; };
            for (const Polynomial& p : tb.symbol.cell.equations)
                prod.equations.push_back(p.remap_vars(lift));
            for (const Polynomial& g : tb.symbol.cell.factors)
                prod.factors.push_back(g.remap_vars(lift));
            for (const auto& [sym, sh] :
                 canonicalize_cell(a.tag(), n1 + tb.symbol.nvars, prod))
                out.absorb(sym, sh + ta.shift + tb.shift, ta.coeff * tb.coeff);
        }
    }
    return out;
}

K0Element lshift(const K0Element& a, long long e) {
    K0Element out(a.tag());
    for (const auto& t : a.terms()) out.absorb(t.symbol, t.shift + e, t.coeff);
    return out;
}

K0Element class_of(const ConstructibleSet& a) {
    K0Element out(a.tag);
    const ConstructibleSet d = disjointify(a);
    const int n = static_cast<int>(a.ambient.size());
    std::map<int, int> pos;
    for (int i = 0; i < n; ++i) pos[a.ambient[static_cast<size_t>(i)]] = i;
    auto mapper = [&pos](int v) {
        auto it = pos.find(v);
        if (it == pos.end()) fail(ErrorKind::AmbientError, "cell variable outside the ambient");
        return it->second;
    };
    for (const Cell& c : d.cells) {
        Cell positional;
        for (const Polynomial& p : c.equations) positional.equations.push_back(p.remap_vars(mapper));
        for (const Polynomial& g : c.factors) positional.factors.push_back(g.remap_vars(mapper));
        for (const auto& [sym, sh] : canonicalize_cell(a.tag, n, positional))
            out.absorb(sym, sh, 1);
    }
    return out;
}

std::map<std::string, long long> closed_vector(const K0Element& a) {
    std::map<std::string, long long> out;
    std::vector<K0Element::Term> work = a.terms();
    while (!work.empty()) {
        K0Element::Term t = std::move(work.back());
        work.pop_back();
        const std::vector<Polynomial>& factors = t.symbol.cell.factors;
        if (factors.empty()) {
            const std::string key = symbol_to_string(t.symbol) + "@" + std::to_string(t.shift);
            long long& c = out[key];
            c += t.coeff;
            if (c == 0) out.erase(key);
            continue;
        }
        if (factors.size() > 20)
            fail(ErrorKind::SizeLimit, "inclusion-exclusion over more than 20 factors");
        const size_t m = factors.size();
        for (size_t mask = 0; mask < (static_cast<size_t>(1) << m); ++mask) {
            Cell closed;
            closed.equations = t.symbol.cell.equations;
            int sign = 1;
            for (size_t i = 0; i < m; ++i) {
                if (mask & (static_cast<size_t>(1) << i)) {
                    closed.equations.push_back(factors[i]);
                    sign = -sign;
                }
            }
            for (const auto& [sym, sh] : canonicalize_cell(a.tag(), t.symbol.nvars, closed))
                work.push_back(K0Element::Term{sym, t.shift + sh, t.coeff * sign});
        }
    }
    return out;
}

std::string certificate_hash(const std::string& phi, const std::string& psi,
                             const std::string& eta) {
    std::uint64_t h = 1469598103934665603ull;
    auto eat = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;  // field separator
        h *= 1099511628211ull;
    };
    eat(phi);
    eat(psi);
    eat(eta);
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xf);
    return os.str();
}

void CertificateRegistry::append(BijectionCertificate cert) {
    if (!cert.verified)
        fail(ErrorKind::RegistryError, "only verified certificates may be appended");
    certs_.push_back(std::move(cert));
}

void CertificateRegistry::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorKind::RegistryError, "cannot open registry file for writing: " + path);
    for (const BijectionCertificate& c : certs_) {
        nlohmann::ordered_json j;
        j["phi"] = c.source_text;
        j["psi"] = c.target_text;
        j["eta"] = c.graph_text;
        j["hash"] = c.hash;
        out << j.dump() << "\n";
    }
    if (!out) fail(ErrorKind::RegistryError, "failed writing registry file: " + path);
}

CertificateRegistry CertificateRegistry::load(Session& s, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::RegistryError, "cannot open registry file: " + path);
    CertificateRegistry reg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
            fail(ErrorKind::RegistryError,
                 "registry line " + std::to_string(lineno) + ": malformed JSON");
        }
        for (const char* field : {"phi", "psi", "eta", "hash"})
            if (!j.contains(field) || !j[field].is_string())
                fail(ErrorKind::RegistryError, "registry line " + std::to_string(lineno) +
                                                   ": missing field " + field);
        const std::string phi_text = j["phi"], psi_text = j["psi"], eta_text = j["eta"];
        if (certificate_hash(phi_text, psi_text, eta_text) != j["hash"].get<std::string>())
            fail(ErrorKind::RegistryError,
                 "registry line " + std::to_string(lineno) + ": integrity hash mismatch");
        try {
            const Formula phi = parse_formula(s, phi_text);
            const Formula psi = parse_formula(s, psi_text);
            const Formula eta = parse_formula(s, eta_text);
            register_bijection(s, phi, psi, eta, reg);
        } catch (const CalcError& e) {
            fail(ErrorKind::RegistryError, "registry line " + std::to_string(lineno) +
                                               ": re-verification failed: " + e.what());
        }
    }
    return reg;
}

namespace {

Formula implies(Formula a, Formula b) {
    return Formula::disj(Formula::negation(std::move(a)), std::move(b));
}

Formula forall_over(const std::vector<int>& vars, Formula body) {
    std::vector<int> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
        body = Formula::forall(*it, std::move(body));
    return body;
}

Formula exists_over(const std::vector<int>& vars, Formula body) {
    std::vector<int> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
        body = Formula::exists(*it, std::move(body));
    return body;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

BijectionCertificate register_bijection(Session& s, const Formula& phi, const Formula& psi,
                                        const Formula& eta, CertificateRegistry& registry) {
    const std::vector<int> xs = free_vars(phi);
    const std::vector<int> ys = free_vars(psi);
    const std::vector<int> zs = free_vars(eta);
    {
        std::vector<int> both = concat(xs, ys);
        std::sort(both.begin(), both.end());
        if (std::adjacent_find(both.begin(), both.end()) != both.end())
            fail(ErrorKind::ArityError, "source and target variables overlap");
        if (both != zs)
            fail(ErrorKind::ArityError,
                 "graph variables must be exactly the source and target variables");
    }

    // Primed copies of a variable tuple inside the graph formula.
    auto freshen = [&s](const std::vector<int>& vars, Formula base) {
        std::vector<int> copies;
        copies.reserve(vars.size());
        Formula out = std::move(base);
        for (int v : vars) {
            const int nv = s.fresh_var(s.var_name(v));
            copies.push_back(nv);
            out = substitute(s, out, v, Polynomial::variable(s.tag(), nv));
        }
        return std::make_pair(copies, out);
    };
    auto agree = [&s](const std::vector<int>& vars, const std::vector<int>& copies) {
        std::vector<Formula> eqs;
        eqs.reserve(vars.size());
        for (size_t i = 0; i < vars.size(); ++i)
            eqs.push_back(Formula::atom(Polynomial::variable(s.tag(), vars[i]) -
                                        Polynomial::variable(s.tag(), copies[i])));
        return Formula::conj_all(s.tag(), std::move(eqs));
    };

    auto [ys2, eta_y2] = freshen(ys, eta);
    auto [xs2, eta_x2] = freshen(xs, eta);

    // Every source point has an image, and at most one.
    const Formula totality = forall_over(xs, implies(phi, exists_over(ys, eta)));
    const Formula functionality = forall_over(
        concat(concat(xs, ys), ys2),
        implies(Formula::conj(eta, eta_y2), agree(ys, ys2)));
    // Distinct source points have distinct images.
    const Formula injectivity = forall_over(
        concat(concat(xs, xs2), ys),
        implies(Formula::conj(eta, eta_x2), agree(xs, xs2)));
    // Every target point is hit, and the graph stays inside source x target.
    const Formula surjectivity = forall_over(ys, implies(psi, exists_over(xs, eta)));
    const Formula membership =
        forall_over(concat(xs, ys), implies(eta, Formula::conj(phi, psi)));

    struct Check {
        const char* name;
        Formula sentence;
    };
    const Check checks[3] = {
        {"totality+functionality", Formula::conj(totality, functionality)},
        {"injectivity", injectivity},
        {"surjectivity", Formula::conj(surjectivity, membership)},
    };
    for (const Check& c : checks)
        if (!decide(s, c.sentence))
            fail(ErrorKind::NotABijection, std::string(c.name) + " sentence fails");

    BijectionCertificate cert{
        pretty_print(s, phi),
        pretty_print(s, psi),
        pretty_print(s, eta),
        to_cells_with_ambient(s, phi, xs),
        to_cells_with_ambient(s, psi, ys),
        to_cells_with_ambient(s, eta, zs),
        K0Element::zero(s.tag()),
        K0Element::zero(s.tag()),
        "",
        false,
    };
    cert.source_class = class_of(cert.source);
    cert.target_class = class_of(cert.target);
    cert.hash = certificate_hash(cert.source_text, cert.target_text, cert.graph_text);
    cert.verified = true;
    registry.append(cert);
    return cert;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equal: return "equal";
        case Verdict::Distinct: return "distinct";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<int> rewrite_distance_to_zero(const K0Element& diff, const CertificateRegistry& reg,
                                            int depth) {
    using Vec = std::map<std::string, long long>;
    auto serialize = [](const Vec& v) {
        std::string s;
        for (const auto& [k, c] : v) {
            s += k;
            s += ':';
            s += std::to_string(c);
            s += ';';
        }
        return s;
    };
    const Vec start = closed_vector(diff);
    if (start.empty()) return 0;

    std::vector<Vec> deltas;
    for (const BijectionCertificate& c : reg.certificates()) {
        Vec d = closed_vector(sub(c.source_class, c.target_class));
        if (!d.empty()) deltas.push_back(std::move(d));
    }
    if (deltas.empty() || depth <= 0) return std::nullopt;

    std::set<std::string> seen{serialize(start)};
    std::vector<Vec> frontier{start};
    for (int step = 1; step <= depth; ++step) {
        std::vector<Vec> next;
        for (const Vec& node : frontier) {
            for (const Vec& d : deltas) {
                for (int sgn : {1, -1}) {
                    Vec cand = node;
                    for (const auto& [k, c] : d) {
                        long long& slot = cand[k];
                        slot += sgn * c;
                        if (slot == 0) cand.erase(k);
                    }
                    if (cand.empty()) return step;
                    std::string key = serialize(cand);
                    if (seen.insert(std::move(key)).second) next.push_back(std::move(cand));
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return std::nullopt;
}

K0Element base_extend(const K0Element& a, int m) {
    if (m < 1) fail(ErrorKind::DegenerateInput, "base extension degree must be >= 1");
    if (a.tag().p == 0)
        fail(ErrorKind::CharZeroUnsupported, "base extension needs a finite characteristic");
    return a;
}

}  // namespace k0calc
