#pragma once

namespace nelsonlab {

/// Gamma function for x > 0 via the Lanczos approximation (g = 7, 9
/// coefficients), with reflection below 0.5.  Relative error < 1e-10 on
/// the range this project uses, (0.25, 3].
double gamma_fn(double x);

/// Sine integral Si(x) = int_0^x sin(t)/t dt for x >= 0, absolute error
/// below 1e-10.  Power series for small x, auxiliary-function form
/// Si = pi/2 - f cos - g sin elsewhere.
double sine_integral(double x);

}  // namespace nelsonlab
