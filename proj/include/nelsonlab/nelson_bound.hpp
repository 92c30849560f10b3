#pragma once

#include "nelsonlab/model.hpp"

namespace nelsonlab {

struct GammaBeta {
    double gamma = 0.0;  // 256 pi^2 a^2 N^2 p [(N-1)(C^2 + 2 C D_eps) + N D_eps^2]
    double beta = 0.0;   // 256 pi^2 a^2 N F_theta^2 p^2 / (p-1)
};

GammaBeta gamma_beta(const ModelParams& model, const BoundParams& bp);

enum class PairKind { Diagonal, Cross };

/// Exponential-moment growth rate per unit time of the self-intersection
/// functionals:
///   diagonal:  A_t lam^{2/(2-t)} eps^{2/(2-t)} + B_t eps^{1-t/2} lam / (1 - t/2)
///   cross:     2^{-t/(2-t)} A_t lam^{2/(2-t)} eps^{2/(2-t)}
double exp_moment_rate(double lambda_coeff, double theta, double epsilon, PairKind kind);

/// Four-term lower bound on E + Q; uniform in mu and lambda_uv (neither is
/// read).  total <= 0 always, = 0 iff alpha = 0.
BoundBreakdown evaluate_bound(const ModelParams& model, const BoundParams& bp);

struct LargeAlphaBound {
    double value = 0.0;
    BoundBreakdown breakdown;
    double d_constant = 0.0;  // |total| / (a^2 N^3 log^2(a N))
    double u_constant = 0.0;  // 2^8 pi^2 p (2^phi ||phi||_inf Gamma(2-phi))^2
    BoundParams params;
};

/// theta = 3/2, eps = (N alpha)^{-2}, 1 - phi = 1/log(N^2 alpha^2); requires
/// N^2 alpha^2 >= e.
LargeAlphaBound large_alpha_bound(const ModelParams& model, double p = 2.0);

struct SmallAlphaBound {
    double value = 0.0;
    BoundBreakdown breakdown;
    BoundParams params;
};

/// theta = 3/2 with eps = N^{-2}, phi = 1 - 1/log(N^2) for N >= 2; eps = 1,
/// phi = 0 for N = 1.  Requires alpha <= alpha_threshold.
SmallAlphaBound small_alpha_bound(const ModelParams& model, double p = 2.0,
                                  double alpha_threshold = 1.0);

struct OptimizeConfig {
    int starts_per_axis = 4;      // multi-start grid resolution per parameter
    double simplex_tol = 1e-8;    // relative simplex size at convergence
    int max_iterations = 400;     // per start
};

struct OptimizeResult {
    BoundParams best;
    BoundBreakdown breakdown;
    bool converged = false;
    long evaluations = 0;
};

/// Maximises total (least negative) over (theta, phi, eps, p) by multi-start
/// Nelder-Mead in transformed coordinates (logit(theta-1), logit(phi),
/// log eps, log(p-1)).  Seeds include the default parameters and both
/// specialisations whenever their preconditions hold, so the result never
/// falls below those fixed choices.
OptimizeResult optimize_bound(const ModelParams& model, const OptimizeConfig& cfg = {});

}  // namespace nelsonlab
