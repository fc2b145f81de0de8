#include <cstdlib>
#include <iostream>

#include "coulgas/acceptance.hpp"

// Runs the full acceptance suite; each criterion prints a single PASS/FAIL
// line. Workers and seed can be overridden via arguments.
int main(int argc, char** argv) {
    int workers = argc > 1 ? std::atoi(argv[1]) : 4;
    std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2026;
    std::vector<coulgas::CriterionResult> results =
        coulgas::run_acceptance(std::cout, workers, seed);
    bool ok = coulgas::all_passed(results);
    std::cout << (ok ? "acceptance suite: all criteria passed"
                     : "acceptance suite: FAILURES present")
              << "\n";
    return ok ? 0 : 1;
}
