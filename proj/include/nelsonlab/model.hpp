#pragma once

#include <limits>

namespace nelsonlab {

/// Physical inputs: coupling alpha >= 0, meson mass mu >= 0, UV cutoff
/// lambda_uv > 0 (may be +inf only where an operation is cutoff-uniform),
/// particle count n >= 1.
struct ModelParams {
    double alpha = 0.0;
    double mu = 0.0;
    double lambda_uv = std::numeric_limits<double>::infinity();
    int n = 1;
};

void validate(const ModelParams& params);

/// The four free estimate parameters: theta in (1,2), phi_param in [0,1),
/// epsilon > 0, p > 1.
struct BoundParams {
    double theta = 1.5;
    double phi_param = 0.0;
    double epsilon = 1.0;
    double p = 2.0;
};

void validate(const BoundParams& params);

/// The four additive pieces of the lower bound; total = -(sum of the four).
struct BoundBreakdown {
    double term_cross = 0.0;        // N^2 (N-1) (C^2 + 2 C D_eps) piece
    double term_diag = 0.0;         // N^3 D_eps^2 piece
    double term_cluster = 0.0;      // A_theta piece
    double term_short_range = 0.0;  // B_theta piece
    double total = 0.0;
};

}  // namespace nelsonlab
