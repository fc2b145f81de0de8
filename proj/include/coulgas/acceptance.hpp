#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace coulgas {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Run the full acceptance suite (9 criteria); one PASS/FAIL line per
// criterion is written to log as it completes.
std::vector<CriterionResult> run_acceptance(std::ostream& log, int workers = 4,
                                            std::uint64_t seed = 2026);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace coulgas
