#pragma once

#include "nelsonlab/model.hpp"

namespace nelsonlab {

/// Renormalization counterterm
///   Q = 4 pi alpha N int_0^Lambda r^2 / (nu(r) [r^2/2 + nu(r)]) dr,
/// nu(r) = sqrt(r^2 + mu^2).  Exactly linear in alpha*N by construction;
/// finite Lambda required (Q grows like log Lambda).
double q_counterterm(const ModelParams& params, double tol = 1e-10);

/// Leading cutoff behaviour 8 pi alpha N ln(Lambda); requires Lambda > e.
double q_log_asymptote(const ModelParams& params);

}  // namespace nelsonlab
