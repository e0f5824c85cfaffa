#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mhdlab/app/config.hpp"
#include "mhdlab/app/output.hpp"

namespace mhdlab::app {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;  // one-line measured values
    json measured;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    int jobs = 1;
    std::set<int> only;  // empty: all criteria
    std::function<void(const CriterionResult&)> on_result;
};

inline constexpr int acceptance_count = 11;

/// Runs the acceptance battery. cfg supplies the sheared profile, α, seed and thresholds for the
/// criteria that use the default run; criteria with fixed profiles ignore it.
/// A criterion that throws is reported as failed with the error in its summary.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const AcceptanceOptions& opts);

/// One line: "[PASS] 1 constant-coefficient oracle: ... (0.8 s)".
std::string format_line(const CriterionResult& r);

json to_json(const CriterionResult& r);

}  // namespace mhdlab::app
