#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace nelsonlab {

/// Kernel interpolation grid: n_tau log-spaced time lags down to dt/2 (plus
/// an exact tau = 0 row), n_d linearly spaced separations up to d_max.
/// d_max = 0 means "size from the ensemble at hand".
struct KernelGridSpec {
    int n_tau = 1200;
    int n_d = 4000;
    double d_max = 0.0;
};

struct SimConfig {
    double t_final = 1.0;
    double dt = 0.01;
    int n_paths = 100;
    std::uint64_t seed = 1;
    KernelGridSpec kernel_grid;
    std::vector<std::array<double, 3>> offsets;  // initial positions; empty = all at origin
    int n_threads = 0;                           // 0 = hardware concurrency
    std::size_t memory_budget_bytes = std::size_t(2) << 30;

    int steps() const;  // t_final / dt, validated to divide evenly
};

void validate(const SimConfig& cfg, int n_particles);

/// Discretised 3N-dimensional Brownian paths, all starting at the origin
/// (offsets enter only through the kernels).  Increments are independent
/// N(0, dt) per coordinate; the per-path generator is derived
/// deterministically from (seed, path index).
class PathEnsemble {
  public:
    PathEnsemble(int n_paths, int n_steps, int n_particles);

    int n_paths() const { return n_paths_; }
    int n_steps() const { return n_steps_; }  // number of increments; n_steps+1 grid points
    int n_particles() const { return n_particles_; }

    /// Coordinate c of particle m at grid index k of path p.
    double position(int p, int k, int m, int c) const {
        return data_[p][(static_cast<std::size_t>(k) * n_particles_ + m) * 3 + c];
    }
    double* path_data(int p) { return data_[p].data(); }
    const double* path_data(int p) const { return data_[p].data(); }

  private:
    int n_paths_, n_steps_, n_particles_;
    std::vector<std::vector<double>> data_;  // [path][(step*N + m)*3 + c]
};

PathEnsemble sample_paths(const SimConfig& cfg, int n_particles);

/// SplitMix64 scrambler used for deterministic per-path seeding.
std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal deviates from explicit Box-Muller on 53-bit uniforms;
/// keeps ensembles bit-identical across standard libraries.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}
    double next();

  private:
    double uniform();
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace nelsonlab
