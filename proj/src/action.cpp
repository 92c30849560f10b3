#include "nelsonlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>

namespace nelsonlab {

double action_coefficient(double alpha, ModelKind kind) {
    if (kind == ModelKind::Nelson) return alpha;
    return alpha / (std::pow(2.0, 1.5) * std::numbers::pi * std::numbers::pi);
}

double ensemble_distance_bound(const PathEnsemble& ensemble, const SimConfig& cfg) {
    double max_norm2 = 0.0;
    const int n = ensemble.n_particles();
    for (int p = 0; p < ensemble.n_paths(); ++p) {
        const double* data = ensemble.path_data(p);
        const std::size_t total = static_cast<std::size_t>(ensemble.n_steps() + 1) * n;
        for (std::size_t i = 0; i < total; ++i) {
            const double x = data[3 * i];
            const double y = data[3 * i + 1];
            const double z = data[3 * i + 2];
            max_norm2 = std::max(max_norm2, x * x + y * y + z * z);
        }
    }
    double span = 0.0;
    if (!cfg.offsets.empty()) {
        for (std::size_t a = 0; a < cfg.offsets.size(); ++a)
            for (std::size_t b = a + 1; b < cfg.offsets.size(); ++b) {
                const double dx = cfg.offsets[a][0] - cfg.offsets[b][0];
                const double dy = cfg.offsets[a][1] - cfg.offsets[b][1];
                const double dz = cfg.offsets[a][2] - cfg.offsets[b][2];
                span = std::max(span, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
    }
    return 2.0 * std::sqrt(max_norm2) + span;
}

KernelTable build_kernel_table(const PathEnsemble& ensemble, const ModelParams& model,
                               const SimConfig& cfg, ModelKind kind, KernelOverflow overflow) {
    KernelGridSpec spec = cfg.kernel_grid;
    const double bound = ensemble_distance_bound(ensemble, cfg);
    if (spec.d_max <= 0.0) {
        spec.d_max = std::max(bound, 16.0 * cfg.dt);
    } else if (overflow == KernelOverflow::ExtendTable && bound > spec.d_max) {
        // keep the configured resolution while growing the range
        const double step = spec.d_max / (spec.n_d - 1);
        spec.n_d = static_cast<int>(std::ceil(bound / step)) + 1;
        spec.d_max = step * (spec.n_d - 1);
    }
    return KernelTable(kind, model, cfg.t_final, cfg.dt, spec);
}

ActionStats compute_action(const PathEnsemble& ensemble, const ModelParams& model,
                           const SimConfig& cfg, ModelKind kind, const KernelTable* table,
                           KernelOverflow overflow, bool cross_pairs_only) {
    validate(model);
    validate(cfg, ensemble.n_particles());
    if (model.n != ensemble.n_particles())
        throw std::domain_error("compute_action: model.n does not match the ensemble");

    const int m_steps = ensemble.n_steps();
    const int n = ensemble.n_particles();
    const int n_paths = ensemble.n_paths();

    ActionStats stats;
    stats.samples.assign(n_paths, 0.0);
    const double coeff = action_coefficient(model.alpha, kind);

    if (coeff != 0.0) {
        std::optional<KernelTable> local;
        if (!table) local.emplace(build_kernel_table(ensemble, model, cfg, kind, overflow));
        const KernelTable& kt = table ? *table : *local;

        // Row lookups depend on the lag only through k = (j - i), so cache them.
        std::vector<KernelTable::RowWeight> rows(m_steps + 1);
        for (int k = 0; k <= m_steps; ++k) rows[k] = kt.row_weight(k * cfg.dt);

        std::vector<std::array<double, 3>> offsets = cfg.offsets;
        if (offsets.empty()) offsets.assign(n, {0.0, 0.0, 0.0});

        const double dt2 = cfg.dt * cfg.dt;
        const double d_step_inv = 1.0 / kt.d_step();
        const int n_d = kt.n_d();
        const double d_max = kt.d_max();

        auto eval_path = [&](int p) {
            const double* data = ensemble.path_data(p);
            const std::size_t stride = static_cast<std::size_t>(n) * 3;
            double acc = 0.0;
            for (int j = 1; j <= m_steps; ++j) {
                const double wj = j == m_steps ? 0.5 : 1.0;
                const double* xj = data + j * stride;
                for (int i = 0; i <= j; ++i) {
                    const double w = wj * ((i == 0 || i == j) ? 0.5 : 1.0);
                    const double* xi = data + i * stride;
                    const KernelTable::RowWeight& rw = rows[j - i];
                    const double* row_lo = kt.row(rw.lo);
                    const double* row_hi = kt.row(rw.hi);
                    double pair_sum = 0.0;
                    for (int a = 0; a < n; ++a) {
                        for (int b = 0; b < n; ++b) {
                            if (cross_pairs_only && a == b) continue;
                            const double dx =
                                xj[3 * a] - xi[3 * b] + offsets[a][0] - offsets[b][0];
                            const double dy =
                                xj[3 * a + 1] - xi[3 * b + 1] + offsets[a][1] - offsets[b][1];
                            const double dz =
                                xj[3 * a + 2] - xi[3 * b + 2] + offsets[a][2] - offsets[b][2];
                            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                            double v;
                            if (d > d_max) {
                                v = kt.value((j - i) * cfg.dt, d);
                            } else {
                                const double pos = d * d_step_inv;
                                int l = static_cast<int>(pos);
                                if (l >= n_d - 1) l = n_d - 2;
                                const double wd = pos - l;
                                const double lo = row_lo[l] + wd * (row_lo[l + 1] - row_lo[l]);
                                const double hi = row_hi[l] + wd * (row_hi[l + 1] - row_hi[l]);
                                v = lo + rw.w * (hi - lo);
                            }
                            pair_sum += v;
                        }
                    }
                    acc += w * pair_sum;
                }
            }
            stats.samples[p] = coeff * dt2 * acc;
        };

        int n_threads = cfg.n_threads > 0 ? cfg.n_threads
                                          : static_cast<int>(std::thread::hardware_concurrency());
        n_threads = std::max(1, std::min(n_threads, n_paths));
        if (n_threads == 1) {
            for (int p = 0; p < n_paths; ++p) eval_path(p);
        } else {
            std::vector<std::thread> workers;
            for (int w = 0; w < n_threads; ++w)
                workers.emplace_back([&, w] {
                    for (int p = w; p < n_paths; p += n_threads) eval_path(p);
                });
            for (auto& t : workers) t.join();
        }
    }

    double mean = 0.0;
    for (double v : stats.samples) mean += v;
    mean /= n_paths;
    double var = 0.0;
    for (double v : stats.samples) var += (v - mean) * (v - mean);
    stats.mean = mean;
    stats.variance = n_paths > 1 ? var / (n_paths - 1) : 0.0;

    const double shift = *std::max_element(stats.samples.begin(), stats.samples.end());
    double acc = 0.0;
    for (double v : stats.samples) acc += std::exp(v - shift);
    stats.log_mean_exp = shift + std::log(acc / n_paths);
    return stats;
}

}  // namespace nelsonlab
