#pragma once

#include <vector>

#include "nelsonlab/kernels.hpp"
#include "nelsonlab/model.hpp"
#include "nelsonlab/paths.hpp"

namespace nelsonlab {

struct ActionStats {
    std::vector<double> samples;  // per-path A_T, in path order
    double mean = 0.0;
    double variance = 0.0;      // unbiased sample variance
    double log_mean_exp = 0.0;  // log of the sample mean of e^{A_T}, shifted log-sum-exp
};

/// Per-path action via the trapezoidal double time sum over
/// {0 <= s <= t <= T} (diagonal with half weight), kernel values taken from
/// a precomputed (tau, d) table with bilinear interpolation.
///
/// Net prefactors: alpha for the nucleon model, alpha / (2^{3/2} pi^2) for
/// the electron-phonon model (its 4 pi angular factor lives in the kernel).
ActionStats compute_action(const PathEnsemble& ensemble, const ModelParams& model,
                           const SimConfig& cfg, ModelKind kind,
                           const KernelTable* table = nullptr,
                           KernelOverflow overflow = KernelOverflow::ExtendTable,
                           bool cross_pairs_only = false);

/// Largest pair separation the ensemble can produce, used to size kernel
/// tables: max over paths of 2*max|X| plus the offset span.
double ensemble_distance_bound(const PathEnsemble& ensemble, const SimConfig& cfg);

/// Builds the kernel table an action evaluation over this ensemble needs.
KernelTable build_kernel_table(const PathEnsemble& ensemble, const ModelParams& model,
                               const SimConfig& cfg, ModelKind kind,
                               KernelOverflow overflow = KernelOverflow::ExtendTable);

double action_coefficient(double alpha, ModelKind kind);

}  // namespace nelsonlab
