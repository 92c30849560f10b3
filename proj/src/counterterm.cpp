#include "nelsonlab/counterterm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nelsonlab/quadrature.hpp"

namespace nelsonlab {

double q_counterterm(const ModelParams& params, double tol) {
    validate(params);
    if (std::isinf(params.lambda_uv))
        throw std::domain_error("q_counterterm: divergent counterterm at lambda_uv = +inf");

    const double mu2 = params.mu * params.mu;
    // At mu = 0 the integrand is r/(r/2 + 1) -> 1 as r -> 0; evaluating at
    // r = 0 exactly would be 0/0, but Gauss-Kronrod nodes are interior so the
    // same code path covers the massless case.
    const auto integral = integrate_adaptive(
        [mu2](double r) {
            const double nu = std::sqrt(r * r + mu2);
            return r * r / (nu * (0.5 * r * r + nu));
        },
        0.0, params.lambda_uv, tol);
    return 4.0 * std::numbers::pi * params.alpha * params.n * integral.value;
}

double q_log_asymptote(const ModelParams& params) {
    validate(params);
    if (!std::isfinite(params.lambda_uv) || !(params.lambda_uv > std::numbers::e))
        throw std::domain_error("q_log_asymptote: requires finite lambda_uv > e");
    return 8.0 * std::numbers::pi * params.alpha * params.n * std::log(params.lambda_uv);
}

}  // namespace nelsonlab
