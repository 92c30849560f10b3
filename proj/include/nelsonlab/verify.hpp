#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nelsonlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
    double seconds = 0.0;
};

/// Runs the full verification suite (constant reproduction, algebraic
/// consistency, counterterm asymptotics, Monte Carlo expectation/dominance,
/// Clark-Ocone convergence, combinatorics, optimizer dominance).  Writes one
/// pass/fail line per criterion to `progress` when given.
std::vector<CriterionResult> run_acceptance_criteria(std::ostream* progress = nullptr);

}  // namespace nelsonlab
