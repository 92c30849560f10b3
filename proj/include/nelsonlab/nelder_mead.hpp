#pragma once

#include <functional>
#include <vector>

namespace nelsonlab {

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

/// Derivative-free simplex minimisation (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5).  Converged when the simplex diameter falls
/// below tol relative to the best vertex and the f-spread is comparably
/// small.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double initial_step,
                             double tol, int max_iterations);

}  // namespace nelsonlab
