#include "nelsonlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "nelsonlab/counterterm.hpp"
#include "nelsonlab/nelson_bound.hpp"
#include "nelsonlab/phi.hpp"
#include "nelsonlab/polaron_bound.hpp"
#include "nelsonlab/quadrature.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// (1 - e^{-zV})/z with the z -> 0 limit V.
double one_minus_exp_over(double z, double v) {
    if (z * v < 1e-12) return v;
    return -std::expm1(-z * v) / z;
}

// int_u^T int_u^t e^{-a(t-s)} e^{-b(t-u)} e^{-b(s-u)} ds dt with V = T - u
// (a = nu, b = r^2/2; both Gaussian clocks run from u).
double double_time_integral(double a, double b, double v) {
    const double sum = a + b;
    if (std::abs(a - b) > 1e-6 * sum) {
        return (one_minus_exp_over(2.0 * b, v) - one_minus_exp_over(sum, v)) / (a - b);
    }
    const double c = 0.5 * sum;
    return (-std::expm1(-2.0 * c * v) - 2.0 * c * v * std::exp(-2.0 * c * v)) / (4.0 * c * c);
}

int resolve_threads(const SimConfig& cfg, int n_paths) {
    int n = cfg.n_threads > 0 ? cfg.n_threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, std::min(n, n_paths));
}

void parallel_over_paths(const SimConfig& cfg, int n_paths,
                         const std::function<void(int)>& body) {
    const int n_threads = resolve_threads(cfg, n_paths);
    if (n_threads == 1) {
        for (int p = 0; p < n_paths; ++p) body(p);
        return;
    }
    std::vector<std::thread> workers;
    for (int w = 0; w < n_threads; ++w)
        workers.emplace_back([&, w] {
            for (int p = w; p < n_paths; p += n_threads) body(p);
        });
    for (auto& t : workers) t.join();
}

std::uint64_t mix(std::uint64_t& state) {
    state = splitmix64(state + 0x9e3779b97f4a7c15ULL);
    return state;
}

}  // namespace

double nelson_mean_correction(const ModelParams& model, double t_final, double tol) {
    validate(model);
    if (!std::isfinite(model.lambda_uv))
        throw std::domain_error("nelson_mean_correction: requires finite lambda_uv");
    const double mu2 = model.mu * model.mu;
    return 4.0 * kPi *
           integrate_adaptive(
               [=](double r) {
                   const double nu = std::sqrt(r * r + mu2);
                   if (nu == 0.0) return 0.0;
                   const double rate = 0.5 * r * r + nu;
                   return r * r * (-std::expm1(-rate * t_final)) / (nu * rate * rate);
               },
               0.0, model.lambda_uv, tol)
               .value;
}

double nelson_discrete_mean(const ModelParams& model, const SimConfig& cfg) {
    validate(model);
    validate(cfg, model.n);
    if (!std::isfinite(model.lambda_uv))
        throw std::domain_error("nelson_discrete_mean: requires finite lambda_uv");
    if (model.alpha == 0.0) return 0.0;

    const int m = cfg.steps();
    const int n = model.n;
    const double dt2 = cfg.dt * cfg.dt;

    const RadialRule rule = RadialRule::build(model.lambda_uv, 1.0);
    const std::size_t n_r = rule.nodes.size();
    const double mu2 = model.mu * model.mu;
    std::vector<double> nu(n_r), coeff(n_r);
    for (std::size_t j = 0; j < n_r; ++j) {
        nu[j] = std::sqrt(rule.nodes[j] * rule.nodes[j] + mu2);
        coeff[j] = nu[j] == 0.0
                       ? 0.0
                       : 4.0 * kPi * rule.weights[j] * rule.nodes[j] * rule.nodes[j] / nu[j];
    }

    // Diagonal pairs: E K(tau, |X_t - X_s|) depends on the lag only.
    std::vector<double> lag_weight(m + 1, 0.0);
    for (int j = 1; j <= m; ++j) {
        const double wj = j == m ? 0.5 : 1.0;
        for (int i = 0; i <= j; ++i)
            lag_weight[j - i] += wj * ((i == 0 || i == j) ? 0.5 : 1.0) * dt2;
    }
    double diag = 0.0;
    for (int k = 0; k <= m; ++k) {
        if (lag_weight[k] == 0.0) continue;
        const double tau = k * cfg.dt;
        double kbar = 0.0;
        for (std::size_t j = 0; j < n_r; ++j)
            kbar += coeff[j] * std::exp(-(nu[j] + 0.5 * rule.nodes[j] * rule.nodes[j]) * tau);
        diag += lag_weight[k] * kbar;
    }
    double mean = model.alpha * n * diag;

    if (n >= 2) {
        // Cross pairs: variance (t+s) per coordinate plus the offset shift.
        std::vector<std::array<double, 3>> offsets = cfg.offsets;
        if (offsets.empty()) offsets.assign(n, {0.0, 0.0, 0.0});
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                const double dx = offsets[a][0] - offsets[b][0];
                const double dy = offsets[a][1] - offsets[b][1];
                const double dz = offsets[a][2] - offsets[b][2];
                const double off = std::sqrt(dx * dx + dy * dy + dz * dz);
                double cross = 0.0;
                for (int j_step = 1; j_step <= m; ++j_step) {
                    const double wj = j_step == m ? 0.5 : 1.0;
                    for (int i = 0; i <= j_step; ++i) {
                        const double w = wj * ((i == 0 || i == j_step) ? 0.5 : 1.0) * dt2;
                        const double t = j_step * cfg.dt, s = i * cfg.dt;
                        double kbar = 0.0;
                        for (std::size_t j = 0; j < n_r; ++j) {
                            const double r = rule.nodes[j];
                            kbar += coeff[j] * std::exp(-nu[j] * (t - s) - 0.5 * r * r * (t + s)) *
                                    sinc(r * off);
                        }
                        cross += w * kbar;
                    }
                }
                mean += model.alpha * cross;
            }
    }
    return mean;
}

ExpectationReport expectation_check(const ActionStats& stats, const ModelParams& model,
                                    const SimConfig& cfg, ModelKind kind) {
    validate(model);
    const double t = cfg.t_final;
    const int n_samples = static_cast<int>(stats.samples.size());
    ExpectationReport report;
    report.mean_per_t = stats.mean / t;
    report.mc_se = n_samples > 0 ? std::sqrt(stats.variance / n_samples) / t : 0.0;

    if (kind == ModelKind::Nelson) {
        const double q = q_counterterm(model);
        report.reference_rate = q;
        if (model.alpha == 0.0) {
            report.ratio = 1.0;
            report.pass = true;
            return report;
        }
        report.ratio = stats.mean / (t * q);
        const double rel_se = report.mc_se / q;
        report.pass = report.ratio >= 0.8 && report.ratio <= 1.0 + 3.0 * rel_se;
    } else {
        const double rate = model.alpha * model.n;
        report.reference_rate = rate;
        if (model.alpha == 0.0) {
            report.ratio = 1.0;
            report.pass = true;
            return report;
        }
        report.ratio = stats.mean / (t * rate);
        report.pass = report.mean_per_t <= rate + 3.0 * report.mc_se;
    }
    return report;
}

double bootstrap_se_log_mean_exp(const std::vector<double>& samples, int resamples,
                                 std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    const double shift = *std::max_element(samples.begin(), samples.end());
    std::uint64_t state = seed;
    std::vector<double> values(resamples);
    for (int b = 0; b < resamples; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += std::exp(samples[mix(state) % n] - shift);
        values[b] = shift + std::log(acc / n);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= resamples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / (resamples - 1));
}

double bootstrap_se_mean_exp(const std::vector<double>& samples, int resamples,
                             std::uint64_t seed) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    std::uint64_t state = seed;
    std::vector<double> values(resamples);
    for (int b = 0; b < resamples; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::exp(samples[mix(state) % n]);
        values[b] = acc / n;
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= resamples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / (resamples - 1));
}

EnergyReport energy_estimate(const ActionStats& stats, const ModelParams& model,
                             const SimConfig& cfg, ModelKind kind,
                             const BoundParams& bound_params) {
    validate(model);
    const double t = cfg.t_final;
    EnergyReport report;
    report.fk_rate = stats.log_mean_exp / t;
    report.bootstrap_se = bootstrap_se_log_mean_exp(stats.samples, 200, 0x9e3779b9ULL) / t;

    // Heavy-tail diagnostic: exponential-moment estimators are dominated by
    // the largest samples when the top 1% carries most of the mass.
    const std::size_t n = stats.samples.size();
    if (n >= 2) {
        std::vector<double> expv(n);
        const double shift = *std::max_element(stats.samples.begin(), stats.samples.end());
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            expv[i] = std::exp(stats.samples[i] - shift);
            total += expv[i];
        }
        std::sort(expv.begin(), expv.end(), std::greater<double>());
        const std::size_t top = std::max<std::size_t>(1, n / 100);
        double top_mass = 0.0;
        for (std::size_t i = 0; i < top; ++i) top_mass += expv[i];
        report.heavy_tail_warning = top_mass > 0.5 * total;
    }

    if (kind == ModelKind::Nelson) {
        const double q = q_counterterm(model);
        report.reference = q;
        report.bound_magnitude = -evaluate_bound(model, bound_params).total;
        report.dominance =
            report.fk_rate - q <= report.bound_magnitude + 3.0 * report.bootstrap_se;
    } else {
        const PolaronBounds pb = polaron_bounds(model.alpha, model.n);
        report.reference = pb.expectation_rate;
        const double nn = model.n;
        report.bound_magnitude = pb.alpha2_coefficient * model.alpha * model.alpha * nn *
                                 (4.0 * nn - 3.0) * (4.0 * nn - 3.0);
        report.dominance = report.fk_rate <=
                           pb.expectation_rate + report.bound_magnitude + 3.0 * report.bootstrap_se;
    }
    return report;
}

ClarkOconeSample clark_ocone_rho(const PathEnsemble& ensemble, const ModelParams& model,
                                 const SimConfig& cfg) {
    validate(model);
    validate(cfg, ensemble.n_particles());
    if (!std::isfinite(model.lambda_uv))
        throw std::domain_error("clark_ocone_rho: requires finite lambda_uv");
    if (model.n != ensemble.n_particles())
        throw std::domain_error("clark_ocone_rho: model.n does not match the ensemble");

    const int m = ensemble.n_steps();
    const int n = model.n;
    const int n_paths = ensemble.n_paths();
    const double dt = cfg.dt;

    ClarkOconeSample sample;
    sample.n_paths = n_paths;
    sample.n_steps = m;
    sample.n_particles = n;
    sample.rho.assign(n_paths, std::vector<double>(static_cast<std::size_t>(m) * n * 3, 0.0));
    sample.residuals.assign(n_paths, 0.0);
    sample.rho_square_integral.assign(n_paths, 0.0);

    const ActionStats stats = compute_action(ensemble, model, cfg, ModelKind::Nelson);
    sample.action_samples = stats.samples;

    // E(A_T) reference: Q T plus the (negative) finite-T correction, with the
    // cross term estimated by its own sample mean when N >= 2.
    sample.e_a_t_reference =
        q_counterterm(model) * cfg.t_final -
        model.alpha * model.n * nelson_mean_correction(model, cfg.t_final);
    if (n >= 2) {
        const ActionStats cross = compute_action(ensemble, model, cfg, ModelKind::Nelson,
                                                 nullptr, KernelOverflow::ExtendTable, true);
        sample.e_a_t_reference += cross.mean;
    }
    sample.e_a_t_discrete = nelson_discrete_mean(model, cfg);

    if (model.alpha == 0.0) {
        for (int p = 0; p < n_paths; ++p)
            sample.residuals[p] = stats.samples[p] - sample.e_a_t_reference;
        return sample;
    }

    const double d_bound = std::max(ensemble_distance_bound(ensemble, cfg), 16.0 * dt);
    const RadialRule rule = RadialRule::build(model.lambda_uv, d_bound);
    const std::size_t n_r = rule.nodes.size();
    const double mu2 = model.mu * model.mu;

    std::vector<double> nu(n_r), bcoef(n_r), cphi(n_r);
    for (std::size_t j = 0; j < n_r; ++j) {
        const double r = rule.nodes[j];
        nu[j] = std::sqrt(r * r + mu2);
        bcoef[j] = 0.5 * r * r;
        cphi[j] = nu[j] == 0.0 ? 0.0 : rule.weights[j] * r * r * r / nu[j];
    }

    // Lag tables over multiples of dt:
    //   decay[j][k]    = e^{-nu_j k dt}
    //   horizon[j][k]  = (1 - e^{-(nu_j + b_j) k dt})/(nu_j + b_j)
    //   boxed[j][k]    = double_time_integral(nu_j, b_j, k dt)
    std::vector<std::vector<double>> decay(n_r), horizon(n_r), boxed(n_r);
    for (std::size_t j = 0; j < n_r; ++j) {
        decay[j].resize(m + 1);
        horizon[j].resize(m + 1);
        boxed[j].resize(m + 1);
        for (int k = 0; k <= m; ++k) {
            const double v = k * dt;
            decay[j][k] = std::exp(-nu[j] * v);
            horizon[j][k] = one_minus_exp_over(nu[j] + bcoef[j], v);
            boxed[j][k] = double_time_integral(nu[j], bcoef[j], v);
        }
    }

    std::vector<std::array<double, 3>> offsets = cfg.offsets;
    if (offsets.empty()) offsets.assign(n, {0.0, 0.0, 0.0});

    const double prefactor = -4.0 * kPi * model.alpha;

    auto process_path = [&](int p) {
        const double* data = ensemble.path_data(p);
        const std::size_t stride = static_cast<std::size_t>(n) * 3;
        std::vector<double>& rho = sample.rho[p];

        for (int k = 0; k < m; ++k) {
            const double* xu = data + k * stride;
            for (int a = 0; a < n; ++a) {
                double acc[3] = {0.0, 0.0, 0.0};
                for (int b = 0; b < n; ++b) {
                    const double pref = a == b ? 1.0 : 2.0;
                    // s < u contribution, trapezoidal in s
                    for (int i = 0; i <= k; ++i) {
                        if (k == 0) break;
                        const double* xs = data + i * stride;
                        const double dx = xu[3 * a] - xs[3 * b] + offsets[a][0] - offsets[b][0];
                        const double dy =
                            xu[3 * a + 1] - xs[3 * b + 1] + offsets[a][1] - offsets[b][1];
                        const double dz =
                            xu[3 * a + 2] - xs[3 * b + 2] + offsets[a][2] - offsets[b][2];
                        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                        if (d == 0.0) continue;  // phi(0) = 0; direction immaterial
                        double g = 0.0;
                        for (std::size_t j = 0; j < n_r; ++j)
                            g += cphi[j] * phi(rule.nodes[j] * d) * decay[j][k - i] *
                                 horizon[j][m - k];
                        const double w = ((i == 0 || i == k) ? 0.5 : 1.0) * dt;
                        const double scale = pref * w * g / d;
                        acc[0] += scale * dx;
                        acc[1] += scale * dy;
                        acc[2] += scale * dz;
                    }
                    // s > u contribution: the separation freezes at time u
                    if (a != b) {
                        const double dx = xu[3 * a] - xu[3 * b] + offsets[a][0] - offsets[b][0];
                        const double dy =
                            xu[3 * a + 1] - xu[3 * b + 1] + offsets[a][1] - offsets[b][1];
                        const double dz =
                            xu[3 * a + 2] - xu[3 * b + 2] + offsets[a][2] - offsets[b][2];
                        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                        if (d > 0.0) {
                            double g = 0.0;
                            for (std::size_t j = 0; j < n_r; ++j)
                                g += cphi[j] * phi(rule.nodes[j] * d) * boxed[j][m - k];
                            const double scale = pref * 2.0 * g / d;
                            acc[0] += scale * dx;
                            acc[1] += scale * dy;
                            acc[2] += scale * dz;
                        }
                    }
                }
                const std::size_t base = (static_cast<std::size_t>(k) * n + a) * 3;
                rho[base] = prefactor * acc[0];
                rho[base + 1] = prefactor * acc[1];
                rho[base + 2] = prefactor * acc[2];
            }
        }

        double ito = 0.0, rho2 = 0.0;
        for (int k = 0; k < m; ++k) {
            const double* xk = data + k * stride;
            const double* xk1 = data + (k + 1) * stride;
            const std::size_t base = static_cast<std::size_t>(k) * stride;
            for (std::size_t c = 0; c < stride; ++c) {
                const double r = rho[base + c];
                ito += r * (xk1[c] - xk[c]);
                rho2 += r * r;
            }
        }
        sample.rho_square_integral[p] = rho2 * dt;
        sample.residuals[p] = stats.samples[p] - sample.e_a_t_reference - ito;
    };

    parallel_over_paths(cfg, n_paths, process_path);
    return sample;
}

SupermartingaleReport supermartingale_check(const ActionStats& stats,
                                            const ClarkOconeSample& rho_sample, double p,
                                            std::uint64_t bootstrap_seed) {
    if (!(p > 1.0)) throw std::domain_error("supermartingale_check: requires p > 1");
    SupermartingaleReport report;
    report.p = p;

    const std::size_t n_l = stats.samples.size();
    double lhs = 0.0;
    for (double a : stats.samples) lhs += std::exp(a);
    report.lhs = lhs / n_l;
    report.lhs_se = bootstrap_se_mean_exp(stats.samples, 200, bootstrap_seed);

    const double cp = p * p / (2.0 * (p - 1.0));
    const std::vector<double>& s2 = rho_sample.rho_square_integral;
    const std::size_t n_r = s2.size();
    double inner = 0.0;
    for (double v : s2) inner += std::exp(cp * v);
    inner /= n_r;
    const double outer = std::exp(rho_sample.e_a_t_discrete);
    report.rhs = outer * std::pow(inner, 1.0 - 1.0 / p);

    if (n_r >= 2) {
        std::uint64_t state = bootstrap_seed ^ 0xabcdef12345ULL;
        const int resamples = 200;
        std::vector<double> values(resamples);
        for (int b = 0; b < resamples; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n_r; ++i) acc += std::exp(cp * s2[mix(state) % n_r]);
            values[b] = outer * std::pow(acc / n_r, 1.0 - 1.0 / p);
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= resamples;
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        report.rhs_se = std::sqrt(var / (resamples - 1));
    }

    report.pass = report.lhs <=
                  report.rhs + 3.0 * std::sqrt(report.lhs_se * report.lhs_se +
                                               report.rhs_se * report.rhs_se);
    return report;
}

}  // namespace nelsonlab
