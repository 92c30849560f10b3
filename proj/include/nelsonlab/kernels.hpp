#pragma once

#include <vector>

#include "nelsonlab/model.hpp"
#include "nelsonlab/paths.hpp"

namespace nelsonlab {

enum class ModelKind { Nelson, Polaron };

/// Angularly reduced pair kernel of the nucleon-meson action:
///   4 pi int_0^Lambda e^{-nu(r) tau} nu(r)^{-1} sinc(r d) r^2 dr.
/// Finite for all tau >= 0 when Lambda is finite; Lambda = +inf is
/// unsupported (diverges at tau = 0).
double nelson_kernel(double tau, double d, double mu, double lambda_uv, double tol = 1e-10);

/// Electron-phonon analogue: 4 pi e^{-tau} Si(Lambda d)/d, with the d -> 0
/// limit 4 pi e^{-tau} Lambda.
double polaron_kernel(double tau, double d, double lambda_uv);

/// Composite fixed Gauss-Legendre rule on [0, Lambda], sized so the sinc
/// factor stays resolved up to separations d_max.
struct RadialRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    static RadialRule build(double lambda_uv, double d_max);
};

/// How separations beyond the tabulated d range are handled by the action
/// evaluator: grow the grid to cover the ensemble up front, or keep it and
/// evaluate stray points by quadrature.
enum class KernelOverflow {
    ExtendTable,
    ExactFallback,
};

/// Kernel values precomputed on the (tau, d) grid described by
/// KernelGridSpec, with bilinear interpolation between nodes.  The double
/// time sum of the action makes O(steps^2) kernel calls per path; direct
/// quadrature per call would dominate everything else.
class KernelTable {
  public:
    KernelTable(ModelKind kind, const ModelParams& model, double tau_max, double dt,
                const KernelGridSpec& spec);

    double value(double tau, double d) const;
    double exact(double tau, double d) const;

    double d_max() const { return d_max_; }
    double max_abs() const { return max_abs_; }
    ModelKind kind() const { return kind_; }

    /// Bracketing rows and interpolation weight for a given lag.
    struct RowWeight {
        int lo = 0;
        int hi = 0;
        double w = 0.0;
    };
    RowWeight row_weight(double tau) const;
    const double* row(int i) const { return table_.data() + static_cast<std::size_t>(i) * n_d_; }
    double d_step() const { return d_step_; }
    int n_d() const { return n_d_; }

  private:
    ModelKind kind_;
    ModelParams model_;
    std::vector<double> taus_;
    int n_d_ = 0;
    double d_step_ = 0.0;
    double d_max_ = 0.0;
    double max_abs_ = 0.0;
    std::vector<double> table_;  // row-major [tau][d]
};

}  // namespace nelsonlab
