#ifndef MORSE_VERIFY_HPP
#define MORSE_VERIFY_HPP

#include <string>
#include <vector>

namespace morse {

/// One verification record.  `hard` checks decide the exit code; `warn`
/// checks count as warnings when they miss their tolerance (used for the
/// P-function series outside its validated anharmonicity regime); `info`
/// records are diagnostics that are reported but never asserted, because
/// the legacy forms they probe are internally inconsistent.
struct CheckRecord {
    enum class Severity { hard, warn, info };
    std::string name;
    int l = 0;
    double value = 0.0;
    double target = 0.0;
    double residual = 0.0;
    double tol = 0.0;
    Severity severity = Severity::hard;
    bool pass = true;
    std::string note;
};

struct VerifyOptions {
    std::string scope = "all";  // all | coherent | statistics | thermal | ladder
    std::vector<int> ls = {2, 5, 8};
    double tol_override = 0.0;  // > 0 replaces every hard/warn tolerance
    int quad_order = 200;
    double p_tol = 1e-8;   // P-series truncation tolerance
    int k_max = 60;
    double thermal_A = 1.0;
    double hbar_omega = 1.0;
    std::string command_echo;
};

struct RunReport {
    std::string command;
    VerifyOptions options;
    std::vector<CheckRecord> checks;
    double wall_seconds = 0.0;
    int failures = 0;
    int warnings = 0;
};

RunReport verify_run(const VerifyOptions& options);

/// `#`-prefixed header, one JSON record per check per line, JSON summary.
std::string report_to_text(const RunReport& report);

}  // namespace morse

#endif
