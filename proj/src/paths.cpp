#include "nelsonlab/paths.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace nelsonlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double GaussianStream::uniform() {
    // xorshift64* core; plenty for sampling, fully reproducible.
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    const std::uint64_t bits = state_ * 0x2545f4914f6cdd1dULL;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

int SimConfig::steps() const {
    return static_cast<int>(std::llround(t_final / dt));
}

void validate(const SimConfig& cfg, int n_particles) {
    if (n_particles < 1) throw std::domain_error("SimConfig: n_particles must be >= 1");
    if (!(cfg.t_final > 0.0)) throw std::domain_error("SimConfig: t_final must be > 0");
    if (!(cfg.dt > 0.0)) throw std::domain_error("SimConfig: dt must be > 0");
    const int m = cfg.steps();
    if (m < 1 || std::abs(m * cfg.dt - cfg.t_final) > 1e-9 * cfg.t_final)
        throw std::domain_error("SimConfig: dt must divide t_final");
    if (cfg.n_paths < 1) throw std::domain_error("SimConfig: n_paths must be >= 1");
    if (cfg.kernel_grid.n_tau < 2 || cfg.kernel_grid.n_d < 2)
        throw std::domain_error("SimConfig: kernel grid needs n_tau, n_d >= 2");
    if (!cfg.offsets.empty() && static_cast<int>(cfg.offsets.size()) != n_particles)
        throw std::domain_error("SimConfig: offsets must list one position per particle");

    const std::size_t doubles = static_cast<std::size_t>(cfg.n_paths) * (m + 1) *
                                static_cast<std::size_t>(n_particles) * 3;
    if (doubles * sizeof(double) > cfg.memory_budget_bytes)
        throw std::length_error("SimConfig: requested ensemble exceeds the memory budget");
}

PathEnsemble::PathEnsemble(int n_paths, int n_steps, int n_particles)
    : n_paths_(n_paths), n_steps_(n_steps), n_particles_(n_particles),
      data_(n_paths, std::vector<double>(static_cast<std::size_t>(n_steps + 1) * n_particles * 3)) {}

PathEnsemble sample_paths(const SimConfig& cfg, int n_particles) {
    validate(cfg, n_particles);
    const int m = cfg.steps();
    PathEnsemble ensemble(cfg.n_paths, m, n_particles);

    const double root_dt = std::sqrt(cfg.dt);
    auto fill_path = [&](int p) {
        GaussianStream gauss(splitmix64(splitmix64(cfg.seed) ^ (0x9e3779b97f4a7c15ULL + p)));
        double* data = ensemble.path_data(p);
        const std::size_t stride = static_cast<std::size_t>(n_particles) * 3;
        for (std::size_t c = 0; c < stride; ++c) data[c] = 0.0;
        for (int k = 1; k <= m; ++k)
            for (std::size_t c = 0; c < stride; ++c)
                data[k * stride + c] = data[(k - 1) * stride + c] + root_dt * gauss.next();
        return 0;
    };

    int n_threads = cfg.n_threads > 0
                        ? cfg.n_threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, cfg.n_paths));
    if (n_threads == 1) {
        for (int p = 0; p < cfg.n_paths; ++p) fill_path(p);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w)
            workers.emplace_back([&, w] {
                for (int p = w; p < cfg.n_paths; p += n_threads) fill_path(p);
            });
        for (auto& t : workers) t.join();
    }
    return ensemble;
}

}  // namespace nelsonlab
