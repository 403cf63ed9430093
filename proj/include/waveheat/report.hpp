#pragma once

// Check bookkeeping shared by the experiments and the CLI: every quantitative
// gate records what was expected, what was measured, and the tolerance it was
// held to.

#include <string>
#include <vector>

namespace waveheat {

struct CheckResult {
    std::string name;
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string comparison = "abs";  // "abs" | "ge" | "le"
    std::string note;
};

inline CheckResult check_abs(std::string name, double expected, double measured, double tol,
                             std::string note = "") {
    CheckResult c;
    c.name = std::move(name);
    c.expected = expected;
    c.measured = measured;
    c.tolerance = tol;
    c.comparison = "abs";
    c.pass = std::abs(measured - expected) <= tol;
    c.note = std::move(note);
    return c;
}

inline CheckResult check_ge(std::string name, double threshold, double measured, std::string note = "") {
    CheckResult c;
    c.name = std::move(name);
    c.expected = threshold;
    c.measured = measured;
    c.comparison = "ge";
    c.pass = measured >= threshold;
    c.note = std::move(note);
    return c;
}

inline CheckResult check_le(std::string name, double threshold, double measured, std::string note = "") {
    CheckResult c;
    c.name = std::move(name);
    c.expected = threshold;
    c.measured = measured;
    c.comparison = "le";
    c.pass = measured <= threshold;
    c.note = std::move(note);
    return c;
}

inline bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

}  // namespace waveheat
