#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace selfsim::validation {

/// One measured-vs-expected acceptance check.
struct Check {
    std::string id;
    int criterion;
    std::string description;
    double measured;
    double expected;
    double tolerance;
    /// How measured, expected and tolerance relate, e.g. "abs_diff<=tol".
    std::string relation;
    bool passed;
};

struct Options {
    std::uint64_t seed = 20240607;
    /// Multiplies every tolerance; values below 1 tighten the suite.
    double tolerance_scale = 1.0;
    /// Criteria to run (1-12); empty runs all.
    std::vector<int> criteria;
};

/// Runs the acceptance battery. Deterministic for fixed options.
std::vector<Check> run(const Options& opts = {});

bool all_passed(const std::vector<Check>& checks);

/// Versioned JSON report of a run.
nlohmann::json report(const std::vector<Check>& checks, const Options& opts);

} // namespace selfsim::validation
