#include "nelsonlab/polaron_bound.hpp"

#include <numbers>
#include <stdexcept>

#include "nelsonlab/phi.hpp"

namespace nelsonlab {

PolaronBounds polaron_bounds(double alpha, int n) {
    if (!(alpha >= 0.0)) throw std::domain_error("polaron_bounds: requires alpha >= 0");
    if (n < 1) throw std::domain_error("polaron_bounds: requires n >= 1");

    const double norm = phi_norms().one_norm_over_x;
    const double c = 2.0 / (std::numbers::pi * std::numbers::pi) * norm * norm;

    const double nn = n;
    const double a2 = alpha * alpha;
    PolaronBounds out;
    out.alpha2_coefficient = c;
    out.lower_cutoff = -alpha * nn - c * a2 * nn * (4.0 * nn - 3.0) * (4.0 * nn - 3.0);
    out.lower_no_cutoff = -alpha * nn - a2 * nn * nn * nn / 4.0;
    out.pekar_upper = -0.109 * a2 * nn * nn * nn;
    out.expectation_rate = alpha * nn;
    return out;
}

}  // namespace nelsonlab
