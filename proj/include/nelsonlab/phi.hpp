#pragma once

namespace nelsonlab {

/// phi(x) = (sin x - x cos x) / x^2 for x >= 0, with the removable
/// singularity at 0 handled by its power series (phi ~ x/3 - x^3/30 + ...).
double phi(double x);

/// ||phi(x) x^a||_inf over x >= 0, defined (finite) exactly for a in
/// [-1, 1]; anything else is a domain error.  Cached per a.
double phi_weighted_sup(double a);

/// int_0^inf r^{-(theta-1)/2} / (1 + r/2) dr, the radial factor of F_theta.
/// Cached per theta.
double f_theta_integral(double theta);

/// Norms of phi entering the bound constants.
struct PhiNormTable {
    double sup_norm = 0.0;          // ||phi||_inf
    double one_norm_over_x = 0.0;   // full-line ||phi(x)/x||_1 = 2 int_0^inf |phi(u)|/u du
    double weighted_sup(double a) const { return phi_weighted_sup(a); }
};

/// Computes (and caches) the norm table.  sup norms come from a dense grid
/// scan polished by golden-section search; the L1 norm is integrated panel
/// by panel between consecutive zeros of phi with an asymptotic remainder.
const PhiNormTable& phi_norms();

struct ThetaConstants {
    double a_theta = 0.0;
    double b_theta = 0.0;
};

/// A_theta and B_theta for theta in (1, 2):
///   A = 2^{(3t-2)/(2-t)} t^{t/(2-t)} (2-t) / (3-t)^{2t/(2-t)}
///   B = t Gamma((3-t)/2) / (2^{t/2} Gamma(3/2))
ThetaConstants theta_constants(double theta);

struct DerivedConstants {
    double a_theta = 0.0;
    double b_theta = 0.0;
    double c_const = 0.0;  // ||phi(x)/x||_1 / 2
    double d_eps = 0.0;    // 2^phi ||phi||_inf Gamma(2-phi) / ((1-phi) eps^{1-phi})
    double f_theta = 0.0;  // 2^{-1/2} ||phi(x) x^{theta/2}||_inf f_theta_integral
};

/// All explicit constants for theta in (1,2), phi_param in [0,1), epsilon > 0.
DerivedConstants derived_constants(double theta, double phi_param, double epsilon);

}  // namespace nelsonlab
