#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace quatfact::checks {

/// One property with the worst measured value against its bound.
struct CheckLine {
    std::string name;
    bool passed{false};
    double measured{0.0};
    double bound{0.0};
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckLine> lines;

    [[nodiscard]] bool passed() const;
};

/// projection-lemmas, gradients, admm-invariants, descent, real-rep, oracle-recognition
const std::vector<std::string> &suite_names();

/// Throws config_error for an unknown suite.
SuiteReport run_suite(const std::string &name, std::uint64_t seed = 1);

/// "PASS name: measured <= bound" style lines.
std::string format_report(const SuiteReport &report);

}  // namespace quatfact::checks
