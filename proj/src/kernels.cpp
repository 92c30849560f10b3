#include "nelsonlab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "nelsonlab/quadrature.hpp"
#include "nelsonlab/special.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;

// 15-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 15> kGl15Nodes = {
    0.0000000000000000,  -0.2011940939974345, 0.2011940939974345,
    -0.3941513470775634, 0.3941513470775634,  -0.5709721726085388,
    0.5709721726085388,  -0.7244177313601701, 0.7244177313601701,
    -0.8482065834104272, 0.8482065834104272,  -0.9372733924007060,
    0.9372733924007060,  -0.9879925180204854, 0.9879925180204854};
constexpr std::array<double, 15> kGl15Weights = {
    0.2025782419255613, 0.1984314853271116, 0.1984314853271116,
    0.1861610000155622, 0.1861610000155622, 0.1662692058169939,
    0.1662692058169939, 0.1395706779261543, 0.1395706779261543,
    0.1071592204671719, 0.1071592204671719, 0.0703660474881081,
    0.0703660474881081, 0.0307532419961173, 0.0307532419961173};

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

void require_finite_cutoff(double lambda_uv, const char* who) {
    if (!(lambda_uv > 0.0) || !std::isfinite(lambda_uv))
        throw std::domain_error(std::string(who) + ": requires a finite positive lambda_uv");
}

}  // namespace

double nelson_kernel(double tau, double d, double mu, double lambda_uv, double tol) {
    require_finite_cutoff(lambda_uv, "nelson_kernel");
    if (!(tau >= 0.0)) throw std::domain_error("nelson_kernel: requires tau >= 0");
    if (!(d >= 0.0)) throw std::domain_error("nelson_kernel: requires d >= 0");
    if (!(mu >= 0.0)) throw std::domain_error("nelson_kernel: requires mu >= 0");

    const double mu2 = mu * mu;
    const double scale = 1.0 + 2.0 * kPi * lambda_uv * lambda_uv;  // ~ K(0, 0)
    const auto result = integrate_adaptive(
        [=](double r) {
            const double nu = std::sqrt(r * r + mu2);
            if (nu == 0.0) return 0.0;  // massless r -> 0 limit of r^2/nu
            return std::exp(-nu * tau) * (r * r / nu) * sinc(r * d);
        },
        0.0, lambda_uv, tol * scale);
    return 4.0 * kPi * result.value;
}

double polaron_kernel(double tau, double d, double lambda_uv) {
    require_finite_cutoff(lambda_uv, "polaron_kernel");
    if (!(tau >= 0.0)) throw std::domain_error("polaron_kernel: requires tau >= 0");
    if (!(d >= 0.0)) throw std::domain_error("polaron_kernel: requires d >= 0");
    const double radial = d == 0.0 ? lambda_uv : sine_integral(lambda_uv * d) / d;
    return 4.0 * kPi * std::exp(-tau) * radial;
}

RadialRule RadialRule::build(double lambda_uv, double d_max) {
    require_finite_cutoff(lambda_uv, "RadialRule");
    // Enough panels to give the fastest sinc oscillation (wavelength 2pi/d_max
    // in r) several nodes per half-period.
    const int panels = std::clamp(static_cast<int>(std::ceil(lambda_uv * std::max(d_max, 0.0) / 5.0)),
                                  4, 4000);
    RadialRule rule;
    rule.nodes.reserve(15 * panels);
    rule.weights.reserve(15 * panels);
    const double h = lambda_uv / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (int j = 0; j < 15; ++j) {
            rule.nodes.push_back(mid + 0.5 * h * kGl15Nodes[j]);
            rule.weights.push_back(0.5 * h * kGl15Weights[j]);
        }
    }
    return rule;
}

KernelTable::KernelTable(ModelKind kind, const ModelParams& model, double tau_max, double dt,
                         const KernelGridSpec& spec)
    : kind_(kind), model_(model) {
    validate(model);
    require_finite_cutoff(model.lambda_uv, "KernelTable");
    if (!(tau_max > 0.0) || !(dt > 0.0) || dt > tau_max)
        throw std::domain_error("KernelTable: requires 0 < dt <= tau_max");
    if (spec.n_tau < 2 || spec.n_d < 2)
        throw std::domain_error("KernelTable: grid needs n_tau, n_d >= 2");
    d_max_ = spec.d_max;
    if (!(d_max_ > 0.0)) throw std::domain_error("KernelTable: d_max must be positive");

    // tau = 0 exactly, then n_tau log-spaced values on [dt/2, tau_max].
    taus_.resize(spec.n_tau + 1);
    taus_[0] = 0.0;
    const double lo = 0.5 * dt;
    const double ratio = std::log(tau_max / lo) / (spec.n_tau - 1);
    for (int i = 0; i < spec.n_tau; ++i) taus_[i + 1] = lo * std::exp(ratio * i);
    taus_.back() = tau_max;

    n_d_ = spec.n_d;
    d_step_ = d_max_ / (n_d_ - 1);
    table_.assign(taus_.size() * static_cast<std::size_t>(n_d_), 0.0);

    const int n_rows = static_cast<int>(taus_.size());
    if (kind_ == ModelKind::Polaron) {
        // Separable: e^{-tau} times a function of d alone.
        std::vector<double> radial(n_d_);
        for (int l = 0; l < n_d_; ++l) {
            const double d = l * d_step_;
            radial[l] = 4.0 * kPi *
                        (d == 0.0 ? model_.lambda_uv : sine_integral(model_.lambda_uv * d) / d);
        }
        for (int i = 0; i < n_rows; ++i) {
            const double decay = std::exp(-taus_[i]);
            double* out = table_.data() + static_cast<std::size_t>(i) * n_d_;
            for (int l = 0; l < n_d_; ++l) out[l] = decay * radial[l];
        }
    } else {
        const RadialRule rule = RadialRule::build(model_.lambda_uv, d_max_);
        const std::size_t n_r = rule.nodes.size();
        const double mu2 = model_.mu * model_.mu;

        std::vector<double> coeff(n_r), nu(n_r);
        for (std::size_t j = 0; j < n_r; ++j) {
            nu[j] = std::sqrt(rule.nodes[j] * rule.nodes[j] + mu2);
            coeff[j] = nu[j] == 0.0
                           ? 0.0
                           : 4.0 * kPi * rule.weights[j] * rule.nodes[j] * rule.nodes[j] / nu[j];
        }
        // sinc factors, row-major in d so the inner product below is contiguous.
        std::vector<double> sincs(static_cast<std::size_t>(n_d_) * n_r);
        for (int l = 0; l < n_d_; ++l) {
            const double d = l * d_step_;
            double* row = sincs.data() + static_cast<std::size_t>(l) * n_r;
            for (std::size_t j = 0; j < n_r; ++j) row[j] = coeff[j] * sinc(rule.nodes[j] * d);
        }

        const int n_threads =
            std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
        auto fill_rows = [&](int begin, int end) {
            std::vector<double> decay(n_r);
            for (int i = begin; i < end; ++i) {
                for (std::size_t j = 0; j < n_r; ++j) decay[j] = std::exp(-nu[j] * taus_[i]);
                double* out = table_.data() + static_cast<std::size_t>(i) * n_d_;
                for (int l = 0; l < n_d_; ++l) {
                    const double* srow = sincs.data() + static_cast<std::size_t>(l) * n_r;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n_r; ++j) acc += decay[j] * srow[j];
                    out[l] = acc;
                }
            }
        };
        if (n_threads == 1) {
            fill_rows(0, n_rows);
        } else {
            std::vector<std::thread> workers;
            const int chunk = (n_rows + n_threads - 1) / n_threads;
            for (int w = 0; w < n_threads; ++w) {
                const int begin = w * chunk;
                const int end = std::min(n_rows, begin + chunk);
                if (begin < end) workers.emplace_back(fill_rows, begin, end);
            }
            for (auto& t : workers) t.join();
        }
    }
    for (double v : table_) max_abs_ = std::max(max_abs_, std::abs(v));
}

KernelTable::RowWeight KernelTable::row_weight(double tau) const {
    RowWeight rw;
    if (tau <= 0.0) return rw;  // exact tau = 0 row
    const int n = static_cast<int>(taus_.size());
    if (tau >= taus_.back()) {
        rw.lo = rw.hi = n - 1;
        return rw;
    }
    // binary search is cheap enough here; callers cache the result per lag
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (taus_[mid] <= tau)
            lo = mid;
        else
            hi = mid;
    }
    rw.lo = lo;
    rw.hi = hi;
    rw.w = (tau - taus_[lo]) / (taus_[hi] - taus_[lo]);
    return rw;
}

double KernelTable::exact(double tau, double d) const {
    if (kind_ == ModelKind::Polaron) return polaron_kernel(tau, d, model_.lambda_uv);
    return nelson_kernel(tau, d, model_.mu, model_.lambda_uv, 1e-9);
}

double KernelTable::value(double tau, double d) const {
    if (d > d_max_) return exact(tau, d);
    const RowWeight rw = row_weight(tau);
    const double pos = d / d_step_;
    int l = static_cast<int>(pos);
    if (l >= n_d_ - 1) l = n_d_ - 2;
    const double wd = pos - l;
    const double* lo = row(rw.lo);
    const double* hi = row(rw.hi);
    const double v_lo = lo[l] + wd * (lo[l + 1] - lo[l]);
    const double v_hi = hi[l] + wd * (hi[l + 1] - hi[l]);
    return v_lo + rw.w * (v_hi - v_lo);
}

}  // namespace nelsonlab
