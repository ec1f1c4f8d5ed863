#pragma once

// The validation battery behind `validate`: every bounded-window and
// closed-form criterion, run at fixed sample sizes with one stream per
// criterion cell. The quick suite covers moment oracles, independence, the
// disk closed forms, and partial scaling/Orlicz checks; the full suite runs
// everything including the determinism self-check.

#include <string>
#include <vector>

#include <json.hpp>

#include "lpvar/config.hpp"

namespace lpvar {

enum class Suite { quick, full };

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    nlohmann::json values;   // measured quantities
    double wall_seconds = 0; // not serialized in quick reports
};

struct ValidationOptions {
    std::uint64_t seed = 20260808;
    int threads = 0;
    Windows windows;
};

std::vector<CriterionResult> run_criteria(Suite suite, const ValidationOptions& opt);

// Deterministic JSON report; wall times are included only when
// include_timing is set (the quick report must be byte-stable).
nlohmann::json validation_report(Suite suite, const std::vector<CriterionResult>& results,
                                 const ValidationOptions& opt, bool include_timing);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace lpvar
