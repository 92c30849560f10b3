#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace nelsonlab {

/// Result of an adaptive quadrature run.
struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;  // >= 0, <= requested tol on success
    long evaluations = 0;             // integrand calls, >= 1
};

/// Integrable power-law behaviour declared at an interval endpoint:
/// f(x) ~ (x-a)^{-left_exponent} near a, f(x) ~ (b-x)^{-right_exponent}
/// near b.  Exponents must lie in [0, 1); 0 means "no singularity".
/// The integrator removes a declared singularity with the substitution
/// u = (x-a)^{1-exponent} before subdividing.
struct EndpointSingularity {
    double left_exponent = 0.0;
    double right_exponent = 0.0;
};

/// Thrown when the subdivision budget is exhausted before the error
/// estimate drops below the requested tolerance.  Carries the best
/// estimate obtained so far.
class ToleranceNotReached : public std::runtime_error {
  public:
    ToleranceNotReached(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_estimate(best) {}
    QuadResult best_estimate;
};

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod quadrature of f over [a, b] with
/// recursive bisection of the worst interval.  Requires a < b finite and
/// tol > 0.  Integrable endpoint singularities are allowed; declaring
/// them via `singularity` makes convergence fast instead of merely
/// eventual.
QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                              EndpointSingularity singularity = {},
                              long max_evaluations = 1'000'000);

/// Integrates f over [0, inf) by mapping r = t/(1-t) onto (0, 1) first.
/// `origin_exponent` declares f ~ r^{-origin_exponent} near r = 0.
/// `tail_decay_power` declares f ~ r^{-tail_decay_power} as r -> inf; for
/// powers below 2 the map leaves an integrable singularity at t = 1 which
/// is then removed the same way as a declared endpoint singularity.
/// Leave it infinite for integrands that decay faster than any such power.
QuadResult integrate_semi_infinite(const Integrand& f, double tol,
                                   double origin_exponent = 0.0,
                                   double tail_decay_power =
                                       std::numeric_limits<double>::infinity(),
                                   long max_evaluations = 1'000'000);

}  // namespace nelsonlab
