// k0calc: command-line front door. Parses one subcommand, runs it against a
// fresh session built from the global options, and prints one report. Exit
// codes: 0 success (mathematical negative verdicts included), 2 input error,
// 3 budget error.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "k0calc/report.hpp"

using namespace k0calc;

int main(int argc, char** argv) {
    CLI::App app{"exact calculator for classes of constructible sets over algebraically "
                 "closed fields"};
    app.require_subcommand(1);
    app.fallthrough();

    SessionConfig cfg;
    app.add_option("--char", cfg.p, "base characteristic: a prime <= 97, or 0")->required();
    app.add_option("--max-ext", cfg.max_ext, "extension degrees probed by tables and compare")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget", cfg.budget, "enumeration budget per counting call")
        ->check(CLI::PositiveNumber);
    app.add_option("--rewrite-depth", cfg.rewrite_depth, "certificate rewrite search depth")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--registry", cfg.registry_path,
                   "certificate registry file (JSON lines, re-verified on load)");
    app.add_flag("--append-registry", cfg.append_registry,
                 "let certify write the new certificate back to the registry file");
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_flag("--trace", cfg.trace, "include elimination traces in qe/decide reports");

    std::string formula, formula_b, phi, psi, eta, fiber;
    int ext = 1, base_vars = 1;

    CLI::App* c_qe = app.add_subcommand("qe", "eliminate quantifiers from a formula");
    c_qe->add_option("formula", formula, "first-order formula")->required();

    CLI::App* c_decide = app.add_subcommand("decide", "decide a sentence");
    c_decide->add_option("sentence", formula, "closed first-order formula")->required();

    CLI::App* c_count = app.add_subcommand("count", "count the points of a definable set");
    c_count->add_option("formula", formula, "defining formula")->required();
    c_count->add_option("--ext", ext, "extension degree k of the counting field")
        ->check(CLI::PositiveNumber);

    CLI::App* c_class = app.add_subcommand("class", "canonical class of a definable set");
    c_class->add_option("formula", formula, "defining formula")->required();

    CLI::App* c_compare = app.add_subcommand("compare", "equality trichotomy of two classes");
    c_compare->add_option("a", formula, "first defining formula")->required();
    c_compare->add_option("b", formula_b, "second defining formula")->required();

    CLI::App* c_certify = app.add_subcommand("certify", "verify a definable bijection");
    c_certify->add_option("phi", phi, "source set formula")->required();
    c_certify->add_option("psi", psi, "target set formula")->required();
    c_certify->add_option("eta", eta, "graph formula over disjoint variables")->required();

    CLI::App* c_fib = app.add_subcommand("fibcheck", "fibration counting identity check");
    c_fib->add_option("family", formula, "total-space formula; base coordinates come first")
        ->required();
    c_fib->add_option("--base-vars", base_vars, "number of leading base coordinates")
        ->required()
        ->check(CLI::PositiveNumber);
    c_fib->add_option("fiber", fiber, "candidate fiber formula")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    Report report;
    try {
        if (cmd == "qe") report = cmd_qe(cfg, formula);
        else if (cmd == "decide") report = cmd_decide(cfg, formula);
        else if (cmd == "count") report = cmd_count(cfg, formula, ext);
        else if (cmd == "class") report = cmd_class(cfg, formula);
        else if (cmd == "compare") report = cmd_compare(cfg, formula, formula_b);
        else if (cmd == "certify") report = cmd_certify(cfg, phi, psi, eta);
        else report = cmd_fibcheck(cfg, formula, base_vars, fiber);
    } catch (const CalcError& e) {
        const Report err = error_report(cfg, cmd, e);
        std::cout << (cfg.format == "json" ? err.to_json() : err.to_text()) << "\n";
        return err.exit_code;
    }
    std::cout << (cfg.format == "json" ? report.to_json() : report.to_text()) << "\n";
    return report.exit_code;
}
