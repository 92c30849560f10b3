#include "nelsonlab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nelsonlab {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double initial_step,
                             double tol, int max_iterations) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> verts(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += initial_step;

    std::vector<double> fv(dim + 1);
    int evals = 0;
    for (std::size_t i = 0; i <= dim; ++i) {
        fv[i] = f(verts[i]);
        ++evals;
    }

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        std::iota(idx.begin(), idx.end(), 0u);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> v2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t k = 0; k <= dim; ++k) {
            v2[k] = verts[idx[k]];
            f2[k] = fv[idx[k]];
        }
        verts.swap(v2);
        fv.swap(f2);
    };

    NelderMeadResult out;
    int it = 0;
    for (; it < max_iterations; ++it) {
        order();

        double diameter = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            scale = std::max(scale, std::abs(verts[0][i]));
            for (std::size_t k = 1; k <= dim; ++k)
                diameter = std::max(diameter, std::abs(verts[k][i] - verts[0][i]));
        }
        const double fspread = std::abs(fv[dim] - fv[0]);
        if (diameter <= tol * scale && fspread <= tol * (1.0 + std::abs(fv[0]))) {
            out.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += verts[k][i] / dim;

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t i = 0; i < dim; ++i)
                p[i] = centroid[i] + coef * (centroid[i] - verts[dim][i]);
            return p;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = f(xr);
        ++evals;
        if (fr < fv[0]) {
            std::vector<double> xe = blend(2.0);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                verts[dim] = std::move(xe);
                fv[dim] = fe;
            } else {
                verts[dim] = std::move(xr);
                fv[dim] = fr;
            }
        } else if (fr < fv[dim - 1]) {
            verts[dim] = std::move(xr);
            fv[dim] = fr;
        } else {
            const bool outside = fr < fv[dim];
            std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fv[dim])) {
                verts[dim] = std::move(xc);
                fv[dim] = fc;
            } else {
                for (std::size_t k = 1; k <= dim; ++k) {
                    for (std::size_t i = 0; i < dim; ++i)
                        verts[k][i] = verts[0][i] + 0.5 * (verts[k][i] - verts[0][i]);
                    fv[k] = f(verts[k]);
                    ++evals;
                }
            }
        }
    }
    order();
    out.x = verts[0];
    out.fx = fv[0];
    out.iterations = it;
    out.evaluations = evals;
    return out;
}

}  // namespace nelsonlab
