#include "nelsonlab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace nelsonlab {

void validate(const ModelParams& params) {
    if (!(params.alpha >= 0.0)) throw std::domain_error("ModelParams: alpha must be >= 0");
    if (!(params.mu >= 0.0)) throw std::domain_error("ModelParams: mu must be >= 0");
    if (!(params.lambda_uv > 0.0)) throw std::domain_error("ModelParams: lambda_uv must be > 0");
    if (params.n < 1) throw std::domain_error("ModelParams: n must be >= 1");
}

void validate(const BoundParams& params) {
    if (!(params.theta > 1.0) || !(params.theta < 2.0))
        throw std::domain_error("BoundParams: theta must lie in (1, 2)");
    if (!(params.phi_param >= 0.0) || !(params.phi_param < 1.0))
        throw std::domain_error("BoundParams: phi_param must lie in [0, 1)");
    if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon))
        throw std::domain_error("BoundParams: epsilon must be finite and > 0");
    if (!(params.p > 1.0) || !std::isfinite(params.p))
        throw std::domain_error("BoundParams: p must be finite and > 1");
}

}  // namespace nelsonlab
