#include "nelsonlab/nelson_bound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nelsonlab/nelder_mead.hpp"
#include "nelsonlab/phi.hpp"
#include "nelsonlab/special.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;
const double k256Pi2 = 256.0 * kPi * kPi;

double logit(double x) { return std::log(x / (1.0 - x)); }
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

GammaBeta gamma_beta(const ModelParams& model, const BoundParams& bp) {
    validate(model);
    validate(bp);
    const DerivedConstants dc = derived_constants(bp.theta, bp.phi_param, bp.epsilon);
    const double a2 = model.alpha * model.alpha;
    const double n = model.n;
    GammaBeta out;
    out.gamma = k256Pi2 * a2 * n * n * bp.p *
                ((n - 1.0) * (dc.c_const * dc.c_const + 2.0 * dc.c_const * dc.d_eps) +
                 n * dc.d_eps * dc.d_eps);
    out.beta = k256Pi2 * a2 * n * dc.f_theta * dc.f_theta * bp.p * bp.p / (bp.p - 1.0);
    return out;
}

double exp_moment_rate(double lambda_coeff, double theta, double epsilon, PairKind kind) {
    if (!(lambda_coeff >= 0.0))
        throw std::domain_error("exp_moment_rate: requires lambda_coeff >= 0");
    if (!(epsilon > 0.0)) throw std::domain_error("exp_moment_rate: requires epsilon > 0");
    const ThetaConstants tc = theta_constants(theta);
    const double e2 = 2.0 / (2.0 - theta);
    const double cluster = tc.a_theta * std::pow(lambda_coeff, e2) * std::pow(epsilon, e2);
    if (kind == PairKind::Cross) return std::pow(2.0, -theta / (2.0 - theta)) * cluster;
    return cluster +
           tc.b_theta * std::pow(epsilon, 1.0 - theta / 2.0) * lambda_coeff / (1.0 - theta / 2.0);
}

BoundBreakdown evaluate_bound(const ModelParams& model, const BoundParams& bp) {
    validate(model);
    validate(bp);

    BoundBreakdown out;
    if (model.alpha == 0.0) return out;  // every term carries an alpha power

    const DerivedConstants dc = derived_constants(bp.theta, bp.phi_param, bp.epsilon);
    const double a = model.alpha;
    const double n = model.n;
    const double p = bp.p;
    const double th = bp.theta;
    const double eps = bp.epsilon;
    const double s = 2.0 - th;

    out.term_cross = k256Pi2 * p * a * a * n * n * (n - 1.0) *
                     (dc.c_const * dc.c_const + 2.0 * dc.c_const * dc.d_eps);
    out.term_diag = k256Pi2 * p * a * a * n * n * n * dc.d_eps * dc.d_eps;
    out.term_cluster = std::pow(2.0, 16.0 / s) * std::pow(kPi, 4.0 / s) * dc.a_theta *
                       std::pow(n, (6.0 - th) / s) * std::pow(a, 4.0 / s) *
                       std::pow(dc.f_theta, 4.0 / s) * std::pow(p, (2.0 + th) / s) *
                       std::pow(p - 1.0, -th / s) * std::pow(eps, 2.0 / s);
    out.term_short_range = k256Pi2 * a * a * dc.b_theta * std::pow(eps, 1.0 - th / 2.0) * n * n *
                           p * dc.f_theta * dc.f_theta / (1.0 - th / 2.0);
    out.total = -(out.term_cross + out.term_diag + out.term_cluster + out.term_short_range);
    return out;
}

LargeAlphaBound large_alpha_bound(const ModelParams& model, double p) {
    validate(model);
    const double n = model.n;
    const double x = model.alpha * model.alpha * n * n;  // N^2 alpha^2
    if (!(x >= std::numbers::e))
        throw std::domain_error("large_alpha_bound: requires N^2 alpha^2 >= e");

    LargeAlphaBound out;
    out.params.theta = 1.5;
    out.params.phi_param = 1.0 - 1.0 / std::log(x);
    out.params.epsilon = 1.0 / x;
    out.params.p = p;
    out.breakdown = evaluate_bound(model, out.params);
    out.value = out.breakdown.total;

    const double log_an = std::log(model.alpha * n);  // = log(x)/2 >= 1/2
    out.d_constant = -out.breakdown.total /
                     (model.alpha * model.alpha * n * n * n * log_an * log_an);
    const double phi_p = out.params.phi_param;
    const double core =
        std::pow(2.0, phi_p) * phi_norms().sup_norm * gamma_fn(2.0 - phi_p);
    out.u_constant = k256Pi2 * p * core * core;
    return out;
}

SmallAlphaBound small_alpha_bound(const ModelParams& model, double p, double alpha_threshold) {
    validate(model);
    if (!(model.alpha <= alpha_threshold))
        throw std::domain_error("small_alpha_bound: alpha exceeds the configured threshold");

    SmallAlphaBound out;
    out.params.theta = 1.5;
    out.params.p = p;
    if (model.n >= 2) {
        const double n2 = static_cast<double>(model.n) * model.n;
        out.params.epsilon = 1.0 / n2;
        out.params.phi_param = 1.0 - 1.0 / std::log(n2);
    } else {
        out.params.epsilon = 1.0;
        out.params.phi_param = 0.0;
    }
    out.breakdown = evaluate_bound(model, out.params);
    out.value = out.breakdown.total;
    return out;
}

OptimizeResult optimize_bound(const ModelParams& model, const OptimizeConfig& cfg) {
    validate(model);

    OptimizeResult result;
    if (model.alpha == 0.0) {
        result.breakdown = evaluate_bound(model, result.best);
        result.converged = true;
        return result;
    }

    // Transformed coordinates keep every trial point feasible:
    //   theta = 1 + sigmoid(z0), phi = sigmoid(z1), eps = e^{z2}, p = 1 + e^{z3}.
    auto decode = [](const std::vector<double>& z) {
        BoundParams bp;
        bp.theta = 1.0 + std::clamp(sigmoid(z[0]), 0.005, 0.995);
        bp.phi_param = std::min(sigmoid(z[1]), 0.995);
        bp.epsilon = std::exp(std::clamp(z[2], -27.6, 27.6));  // ~[1e-12, 1e12]
        bp.p = 1.0 + std::exp(std::clamp(z[3], -13.8, 13.8));
        return bp;
    };
    auto objective = [&](const std::vector<double>& z) {
        return -evaluate_bound(model, decode(z)).total;
    };

    std::vector<std::vector<double>> starts;
    const int k = std::max(2, cfg.starts_per_axis);
    auto lin = [&](double lo, double hi, int i) { return lo + (hi - lo) * i / (k - 1.0); };
    for (int i0 = 0; i0 < k; ++i0)
        for (int i1 = 0; i1 < k; ++i1)
            for (int i2 = 0; i2 < k; ++i2)
                for (int i3 = 0; i3 < k; ++i3)
                    starts.push_back({logit(lin(0.1, 0.9, i0)), logit(lin(0.05, 0.85, i1)),
                                      lin(std::log(1e-3), std::log(30.0), i2),
                                      lin(std::log(0.3), std::log(10.0), i3)});

    std::vector<BoundParams> seeds;
    seeds.push_back(BoundParams{});
    try {
        seeds.push_back(large_alpha_bound(model).params);
    } catch (const std::domain_error&) {
    }
    try {
        seeds.push_back(small_alpha_bound(model).params);
    } catch (const std::domain_error&) {
    }
    for (const BoundParams& bp : seeds)
        starts.push_back({logit(std::clamp(bp.theta - 1.0, 0.006, 0.994)),
                          logit(std::clamp(bp.phi_param, 1e-6, 0.994)),
                          std::log(bp.epsilon), std::log(bp.p - 1.0)});

    bool have_best = false;
    bool best_converged = false;
    BoundParams best_params;
    double best_total = 0.0;

    auto consider = [&](const BoundParams& bp, bool converged) {
        const double total = evaluate_bound(model, bp).total;
        if (!have_best || total > best_total) {
            have_best = true;
            best_total = total;
            best_params = bp;
            best_converged = converged;
        }
    };

    for (const BoundParams& bp : seeds) consider(bp, true);
    for (const auto& z0 : starts) {
        NelderMeadResult nm =
            nelder_mead(objective, z0, 0.5, cfg.simplex_tol, cfg.max_iterations);
        result.evaluations += nm.evaluations;
        consider(decode(nm.x), nm.converged);
    }

    result.best = best_params;
    result.breakdown = evaluate_bound(model, best_params);
    result.converged = best_converged;
    return result;
}

}  // namespace nelsonlab
