// report.hpp: session configuration, command execution, and deterministic
// machine-readable reports for the command-line front end. Each cmd_* builds
// a fresh session from the config, runs one operation, and returns a Report;
// mathematical negative verdicts (false, Distinct, Unknown, NoFit, failed
// certification) are successful runs with exit code 0. Exit codes: 0 success,
// 2 input error, 3 budget error.
#pragma once

#include <string>

#include "json.hpp"
#include "k0calc/error.hpp"

namespace k0calc {

struct SessionConfig {
    long long p = 0;               // characteristic: a prime <= 97, or 0
    int max_ext = 3;               // extension degrees probed (K)
    long long budget = 10'000'000; // enumeration budget per counting call
    int rewrite_depth = 3;         // certificate rewrite search depth
    std::string registry_path;     // certificate registry file; empty: none
    bool append_registry = false;  // certify writes back to the registry file
    std::string format = "json";   // "json" | "text"
    bool trace = false;            // include elimination traces in reports
};

struct Report {
    std::string command;
    nlohmann::ordered_json body;  // schema-versioned document
    int exit_code = 0;

    std::string to_json() const;  // single-line dump; byte-stable per config
    std::string to_text() const;  // human-readable rendering of the same data
};

Report cmd_qe(const SessionConfig& cfg, const std::string& formula_text);
Report cmd_decide(const SessionConfig& cfg, const std::string& sentence_text);
Report cmd_count(const SessionConfig& cfg, const std::string& formula_text, int ext);
Report cmd_class(const SessionConfig& cfg, const std::string& formula_text);
Report cmd_compare(const SessionConfig& cfg, const std::string& text_a, const std::string& text_b);
Report cmd_certify(const SessionConfig& cfg, const std::string& phi_text,
                   const std::string& psi_text, const std::string& eta_text);
Report cmd_fibcheck(const SessionConfig& cfg, const std::string& family_text, int base_vars,
                    const std::string& fiber_text);

// Report for a failed run; exit code 3 for budget violations, 2 otherwise.
Report error_report(const SessionConfig& cfg, const std::string& command, const CalcError& e);
int exit_code_for(ErrorKind k);

}  // namespace k0calc
