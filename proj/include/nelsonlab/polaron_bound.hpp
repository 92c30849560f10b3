#pragma once

namespace nelsonlab {

/// Ground-state energy bounds for the multi-electron polaron.
struct PolaronBounds {
    double lower_cutoff = 0.0;     // -aN - c a^2 N (4N-3)^2, cutoff-uniform
    double lower_no_cutoff = 0.0;  // -aN - a^2 N^3 / 4
    double pekar_upper = 0.0;      // -0.109 a^2 N^3 (literature value)
    double expectation_rate = 0.0; // aN, the linear growth rate of E(A_T)
    double alpha2_coefficient = 0.0;          // c = (2/pi^2) ||phi(x)/x||_1^2, computed
    double alpha2_coefficient_rounded = 0.76; // the displayed rounding of c
};

PolaronBounds polaron_bounds(double alpha, int n);

}  // namespace nelsonlab
