#include "nelsonlab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nelsonlab/quadrature.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos g = 7, 9 coefficients.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
    // valid for x >= 0.5
    x -= 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x + i);
    const double t = x + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double si_series(double x) {
    // Si(x) = sum_{k>=0} (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    const double x2 = x * x;
    double term = x;  // k = 0 value of x^{2k+1}/(2k+1)!
    double sum = x;
    for (int k = 1; k < 64; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double contrib = term / (2.0 * k + 1.0);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// Auxiliary functions with Si(x) = pi/2 - f(x) cos(x) - g(x) sin(x):
//   f(x) = int_0^inf e^{-xt}/(1+t^2) dt,  g(x) = int_0^inf t e^{-xt}/(1+t^2) dt.

void si_aux_asymptotic(double x, double& f, double& g) {
    // f ~ (1/x) sum (-1)^k (2k)!/x^{2k}, g ~ (1/x^2) sum (-1)^k (2k+1)!/x^{2k};
    // truncated at the smallest term.  Full precision for x >= 40.
    const double ix2 = 1.0 / (x * x);
    double termf = 1.0, sumf = 1.0;
    double termg = 1.0, sumg = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double rf = (2.0 * k - 1.0) * (2.0 * k) * ix2;
        if (rf >= 1.0) break;
        termf *= -rf;
        sumf += termf;
        const double rg = (2.0 * k) * (2.0 * k + 1.0) * ix2;
        if (rg < 1.0) {
            termg *= -rg;
            sumg += termg;
        }
        if (std::abs(termf) < 1e-17) break;
    }
    f = sumf / x;
    g = sumg / (x * x);
}

void si_aux_quadrature(double x, double& f, double& g) {
    // Laplace representations, scaled so the integrand decays like e^{-y}.
    const auto ff = integrate_semi_infinite(
        [x](double y) { return std::exp(-y) / (1.0 + (y / x) * (y / x)); }, 1e-13);
    const auto gg = integrate_semi_infinite(
        [x](double y) { return y * std::exp(-y) / (1.0 + (y / x) * (y / x)); }, 1e-13);
    f = ff.value / x;
    g = gg.value / (x * x);
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: requires x > 0");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * lanczos_gamma(1.0 - x));
    return lanczos_gamma(x);
}

double sine_integral(double x) {
    if (!std::isfinite(x)) throw std::domain_error("sine_integral: non-finite argument");
    if (x < 0.0) throw std::domain_error("sine_integral: requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x <= 12.0) return si_series(x);
    double f, g;
    if (x >= 40.0)
        si_aux_asymptotic(x, f, g);
    else
        si_aux_quadrature(x, f, g);
    return 0.5 * kPi - f * std::cos(x) - g * std::sin(x);
}

}  // namespace nelsonlab
