#include "k0calc/report.hpp"

#include <filesystem>
#include <gmpxx.h>

#include "k0calc/constructible.hpp"
#include "k0calc/formula.hpp"
#include "k0calc/k0.hpp"
#include "k0calc/qe.hpp"
#include "k0calc/realize.hpp"
#include "k0calc/session.hpp"

namespace k0calc {

namespace {

using nlohmann::ordered_json;

Session make_session(const SessionConfig& cfg) {
    Session s(FieldTag{cfg.p});
    s.limits().max_ext = cfg.max_ext;
    s.limits().budget = cfg.budget;
    s.limits().rewrite_depth = cfg.rewrite_depth;
    return s;
}

// Exact values render as JSON integers when they fit, else as exact strings.
ordered_json exact_json(const mpz_class& v) {
    if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
    return v.get_str();
}

ordered_json exact_json(const mpq_class& v) {
    if (v.get_den() == 1) return exact_json(mpz_class(v.get_num()));
    return v.get_str();
}

ordered_json names_of(const Session& s, const std::vector<int>& vars) {
    ordered_json out = ordered_json::array();
    for (int v : vars) out.push_back(s.var_name(v));
    return out;
}

ordered_json skeleton(const SessionConfig& cfg, const std::string& command) {
    ordered_json body;
    body["schema_version"] = 1;
    body["command"] = command;
    body["char"] = cfg.p;
    body["config"] = {{"max_ext", cfg.max_ext},
                      {"budget", cfg.budget},
                      {"rewrite_depth", cfg.rewrite_depth}};
    return body;
}

Report finish(const std::string& command, ordered_json body) {
    body["timing_ms"] = nullptr;  // reserved; kept null for byte-stable output
    Report r;
    r.command = command;
    r.body = std::move(body);
    return r;
}

ordered_json element_json(const K0Element& a) {
    ordered_json terms = ordered_json::array();
    std::string text;
    for (const K0Element::Term& t : a.terms()) {
        terms.push_back({{"coeff", t.coeff},
                         {"symbol", symbol_to_string(t.symbol)},
                         {"shift", t.shift}});
        if (!text.empty()) text += t.coeff < 0 ? " - " : " + ";
        else if (t.coeff < 0) text += "-";
        const long long mag = t.coeff < 0 ? -t.coeff : t.coeff;
        text += std::to_string(mag) + "*" + symbol_to_string(t.symbol) + "@" +
                std::to_string(t.shift);
    }
    if (text.empty()) text = "0";
    return {{"text", text}, {"terms", terms}};
}

CertificateRegistry load_registry(Session& s, const SessionConfig& cfg) {
    if (cfg.registry_path.empty() || !std::filesystem::exists(cfg.registry_path))
        return CertificateRegistry{};  // absent file: empty registry
    return CertificateRegistry::load(s, cfg.registry_path);
}

// Quantifier-free set named by a formula: eliminate, then convert over the
// textual free-variable order of the original input.
struct NamedSet {
    ConstructibleSet set;
    std::vector<int> free_order;
    Formula eliminated;
};

NamedSet named_set(Session& s, const std::string& text, TraceNode* trace = nullptr) {
    ParsedFormula pf = parse_formula_with_ambient(s, text);
    Formula elim = eliminate_all(s, pf.formula, trace);
    return {to_cells_with_ambient(s, elim, pf.free_order), pf.free_order, std::move(elim)};
}

std::string text_scalar(const ordered_json& j) {
    return j.is_string() ? j.get<std::string>() : j.dump();
}

void render_text(const ordered_json& j, const std::string& indent, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() || value.is_array()) {
                out += indent + key + ":\n";
                render_text(value, indent + "  ", out);
            } else {
                out += indent + key + ": " + text_scalar(value) + "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            if (value.is_object() || value.is_array()) {
                out += indent + "-\n";
                render_text(value, indent + "  ", out);
            } else {
                out += indent + "- " + text_scalar(value) + "\n";
            }
        }
    } else {
        out += indent + text_scalar(j) + "\n";
    }
}

}  // namespace

std::string Report::to_json() const { return body.dump(); }

std::string Report::to_text() const {
    std::string out;
    render_text(body, "", out);
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

Report cmd_qe(const SessionConfig& cfg, const std::string& formula_text) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "qe");
    body["inputs"] = {{"formula", formula_text}};

    TraceNode trace;
    NamedSet n = named_set(s, formula_text, cfg.trace ? &trace : nullptr);
    body["free_variables"] = names_of(s, n.free_order);

    ordered_json result;
    result["formula"] = pretty_print(s, cells_to_formula(n.set));
    result["cells"] = n.set.cells.size();
    if (cfg.trace) result["trace"] = trace_to_text(trace);
    body["result"] = std::move(result);
    return finish("qe", std::move(body));
}

Report cmd_decide(const SessionConfig& cfg, const std::string& sentence_text) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "decide");
    body["inputs"] = {{"sentence", sentence_text}};

    TraceNode trace;
    const Formula f = parse_formula(s, sentence_text);
    body["free_variables"] = names_of(s, free_vars(f));
    const bool verdict = decide(s, f, cfg.trace ? &trace : nullptr);

    ordered_json result;
    result["verdict"] = verdict;
    if (cfg.trace) result["trace"] = trace_to_text(trace);
    body["result"] = std::move(result);
    return finish("decide", std::move(body));
}

Report cmd_count(const SessionConfig& cfg, const std::string& formula_text, int ext) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "count");
    body["inputs"] = {{"formula", formula_text}, {"ext", ext}};

    NamedSet n = named_set(s, formula_text);
    body["free_variables"] = names_of(s, n.free_order);
    const K0Element a = class_of(n.set);

    ordered_json result;
    result["count"] = exact_json(count_class(s, a, ext));

    const int K = cfg.max_ext;
    const CountTable t = count_table(s, a, K);
    ordered_json counts = ordered_json::array();
    for (const auto& [k, nk] : t.entries) counts.push_back(exact_json(nk));
    ordered_json table;
    table["p"] = t.p;
    table["K"] = K;
    table["counts"] = std::move(counts);
    table["fit"] = nullptr;
    table["euler"] = nullptr;
    if (K >= 2) {
        if (const auto fit = interpolate_qpoly(t)) {
            ordered_json coeffs = ordered_json::array();
            mpz_class at_one = 0;
            for (const mpz_class& c : fit->coeffs) {
                coeffs.push_back(exact_json(c));
                at_one += c;
            }
            table["fit"] = ordered_json{{"coeffs", std::move(coeffs)}, {"text", fit->to_string()}};
            table["euler"] = exact_json(at_one);
        }
    }
    result["table"] = std::move(table);
    body["result"] = std::move(result);
    return finish("count", std::move(body));
}

Report cmd_class(const SessionConfig& cfg, const std::string& formula_text) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "class");
    body["inputs"] = {{"formula", formula_text}};

    NamedSet n = named_set(s, formula_text);
    body["free_variables"] = names_of(s, n.free_order);

    ordered_json result = element_json(class_of(n.set));
    body["result"] = std::move(result);
    return finish("class", std::move(body));
}

Report cmd_compare(const SessionConfig& cfg, const std::string& text_a,
                   const std::string& text_b) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "compare");
    body["inputs"] = {{"a", text_a}, {"b", text_b}};

    NamedSet na = named_set(s, text_a);
    NamedSet nb = named_set(s, text_b);
    body["free_variables"] = {{"a", names_of(s, na.free_order)},
                              {"b", names_of(s, nb.free_order)}};

    const CertificateRegistry reg = load_registry(s, cfg);
    const CompareOutcome out = compare(s, class_of(na.set), class_of(nb.set), reg);

    ordered_json provenance;
    switch (out.verdict) {
        case Verdict::Equal:
            provenance = {{"branch", "certificate-rewrite"}, {"rewrite_steps", out.rewrite_steps}};
            break;
        case Verdict::Distinct:
            provenance = {{"branch", "count-separation"}, {"witness_k", out.witness_k}};
            break;
        case Verdict::Unknown:
            provenance = {{"branch", "none"}};
            break;
    }
    body["result"] = {{"verdict", verdict_name(out.verdict)}, {"provenance", provenance}};
    return finish("compare", std::move(body));
}

Report cmd_certify(const SessionConfig& cfg, const std::string& phi_text,
                   const std::string& psi_text, const std::string& eta_text) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "certify");
    body["inputs"] = {{"phi", phi_text}, {"psi", psi_text}, {"eta", eta_text}};

    const Formula phi = parse_formula(s, phi_text);
    const Formula psi = parse_formula(s, psi_text);
    const Formula eta = parse_formula(s, eta_text);
    body["free_variables"] = {{"phi", names_of(s, free_vars(phi))},
                              {"psi", names_of(s, free_vars(psi))},
                              {"eta", names_of(s, free_vars(eta))}};

    CertificateRegistry scratch = load_registry(s, cfg);
    ordered_json result;
    try {
        const BijectionCertificate cert = register_bijection(s, phi, psi, eta, scratch);
        result["verified"] = true;
        result["hash"] = cert.hash;
        bool appended = false;
        if (cfg.append_registry && !cfg.registry_path.empty()) {
            scratch.save(cfg.registry_path);
            appended = true;
        }
        result["appended"] = appended;
    } catch (const CalcError& e) {
        // A failed verification is a negative verdict, not an input error.
        if (e.kind() != ErrorKind::NotABijection) throw;
        result["verified"] = false;
        result["reason"] = e.what();
    }
    body["result"] = std::move(result);
    return finish("certify", std::move(body));
}

Report cmd_fibcheck(const SessionConfig& cfg, const std::string& family_text, int base_vars,
                    const std::string& fiber_text) {
    Session s = make_session(cfg);
    ordered_json body = skeleton(cfg, "fibcheck");
    body["inputs"] = {{"family", family_text}, {"base_vars", base_vars}, {"fiber", fiber_text}};

    NamedSet family = named_set(s, family_text);
    NamedSet fiber = named_set(s, fiber_text);
    body["free_variables"] = {{"family", names_of(s, family.free_order)},
                              {"fiber", names_of(s, fiber.free_order)}};

    const FibrationCheck check =
        fibration_check(s, family.set, base_vars, class_of(fiber.set), cfg.max_ext);

    ordered_json rows = ordered_json::array();
    for (const FibrationCheck::Row& row : check.rows)
        rows.push_back({{"k", row.k},
                        {"total", exact_json(row.total)},
                        {"base", exact_json(row.base_count)},
                        {"fiber", exact_json(row.fiber_count)},
                        {"pass", row.pass}});
    body["result"] = {{"base_formula", pretty_print(s, cells_to_formula(check.base))},
                      {"rows", std::move(rows)},
                      {"all_pass", check.all_pass}};
    return finish("fibcheck", std::move(body));
}

int exit_code_for(ErrorKind k) { return k == ErrorKind::SizeLimit ? 3 : 2; }

Report error_report(const SessionConfig& cfg, const std::string& command, const CalcError& e) {
    ordered_json body = skeleton(cfg, command);
    body["error"] = {{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    Report r = finish(command, std::move(body));
    r.exit_code = exit_code_for(e.kind());
    return r;
}

}  // namespace k0calc
