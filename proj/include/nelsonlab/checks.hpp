#pragma once

#include <cstdint>
#include <vector>

#include "nelsonlab/action.hpp"
#include "nelsonlab/model.hpp"
#include "nelsonlab/paths.hpp"

namespace nelsonlab {

struct ExpectationReport {
    double mean_per_t = 0.0;
    double reference_rate = 0.0;  // Q for the nucleon model, alpha*N for the polaron
    double ratio = 1.0;           // mean/(T * reference); 1 by convention at alpha = 0
    double mc_se = 0.0;           // standard error of mean/T
    bool pass = false;
};

/// E(A_T)/T against its linear growth rate: the counterterm for the nucleon
/// model (finite-T corrections are negative, so ratio in [0.8, 1 + 3 rel SE]
/// passes at N = 1), the one-sided alpha*N bound for the polaron.
ExpectationReport expectation_check(const ActionStats& stats, const ModelParams& model,
                                    const SimConfig& cfg, ModelKind kind);

struct EnergyReport {
    double fk_rate = 0.0;       // log mean exp(A_T) / T
    double bootstrap_se = 0.0;  // bootstrap SE of fk_rate
    double reference = 0.0;     // Q or alpha*N
    double bound_magnitude = 0.0;
    bool dominance = false;
    bool heavy_tail_warning = false;  // top 1% of samples carries > 50% of exp mass
};

/// Exponential-moment growth rate with the analytic-dominance check:
/// nucleon fk_rate - Q <= |bound total| + 3 SE; polaron fk_rate <=
/// alpha N + c alpha^2 N (4N-3)^2 + 3 SE.
EnergyReport energy_estimate(const ActionStats& stats, const ModelParams& model,
                             const SimConfig& cfg, ModelKind kind,
                             const BoundParams& bound_params = {});

struct ClarkOconeSample {
    int n_paths = 0;
    int n_steps = 0;
    int n_particles = 0;
    /// rho[p][(k * N + m) * 3 + c], the adapted integrand at grid time k < n_steps.
    std::vector<std::vector<double>> rho;
    std::vector<double> residuals;           // A_T - E(A_T) - sum rho . dX, per path
    std::vector<double> rho_square_integral;  // sum |rho|^2 dt, per path
    std::vector<double> action_samples;
    double e_a_t_reference = 0.0;  // QT minus the finite-T correction (+ MC cross term)
    double e_a_t_discrete = 0.0;   // exact mean of the discretised action
};

/// Conditional-expectation integrand of the nucleon action and the residuals
/// of its stochastic-integral representation.  Finite cutoff only; cost is
/// quadratic in the number of time steps per evaluation point.
ClarkOconeSample clark_ocone_rho(const PathEnsemble& ensemble, const ModelParams& model,
                                 const SimConfig& cfg);

struct SupermartingaleReport {
    double p = 0.0;
    double lhs = 0.0;  // sample mean of e^{A_T}
    double rhs = 0.0;  // e^{E(A_T)} [sample mean of e^{p^2/(2(p-1)) int rho^2}]^{1-1/p}
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    bool pass = false;  // lhs <= rhs + 3 combined SE
};

/// Both sides of the exponential-moment estimate, from independent
/// ensembles (the caller supplies stats and rho from different seeds to
/// avoid correlation bias).
SupermartingaleReport supermartingale_check(const ActionStats& stats,
                                            const ClarkOconeSample& rho_sample, double p,
                                            std::uint64_t bootstrap_seed = 7);

/// Finite-T correction to E(A_T) for the nucleon model, per unit alpha*N:
/// 4 pi int_0^Lambda r^2 (1 - e^{-(nu + r^2/2) T}) / (nu (r^2/2 + nu)^2) dr.
double nelson_mean_correction(const ModelParams& model, double t_final, double tol = 1e-10);

/// Exact expectation of the discretised nucleon action (trapezoidal double
/// sum), in closed form via E sinc(r|Delta|) Gaussians.
double nelson_discrete_mean(const ModelParams& model, const SimConfig& cfg);

/// Bootstrap standard error helpers (deterministic given the seed).
double bootstrap_se_log_mean_exp(const std::vector<double>& samples, int resamples,
                                 std::uint64_t seed);
double bootstrap_se_mean_exp(const std::vector<double>& samples, int resamples,
                             std::uint64_t seed);

}  // namespace nelsonlab
