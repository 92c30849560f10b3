#include "nelsonlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace nelsonlab {

namespace {

// 15-point Kronrod abscissae (positive half, descending) with the embedded
// 7-point Gauss rule on the even-indexed nodes.  QUADPACK dqk15 values.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
    double resabs;
};

PanelResult gk15(const Integrand& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);

    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);

    std::array<double, 7> flo{}, fhi{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        flo[j] = f(center - dx);
        fhi[j] = f(center + dx);
        const double fsum = flo[j] + fhi[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(flo[j]) + std::abs(fhi[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(flo[j] - reskh) + std::abs(fhi[j] - reskh));

    PanelResult out;
    out.value = resk * half;
    out.resabs = resabs * std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (out.resabs > uflow / (50.0 * eps))
        err = std::max(eps * 50.0 * out.resabs, err);
    out.error = err;
    return out;
}

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

QuadResult adaptive_core(const Integrand& f, double a, double b, double tol,
                         long max_evaluations) {
    long evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };

    std::priority_queue<Segment> queue;
    PanelResult first = gk15(counted, a, b);
    queue.push({a, b, first.value, first.error});
    double total_value = first.value;
    double total_error = first.error;

    const double min_width = 16.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::abs(a), std::abs(b), 1.0});

    while (total_error > tol) {
        if (queue.empty()) break;
        Segment worst = queue.top();
        if (worst.b - worst.a < min_width * 1e-4) break;  // cannot refine further
        if (evals + 30 > max_evaluations) {
            QuadResult best{total_value, total_error, std::max(evals, 1L)};
            throw ToleranceNotReached("integrate_adaptive: tolerance not reached within evaluation budget", best);
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        PanelResult left = gk15(counted, worst.a, mid);
        PanelResult right = gk15(counted, mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
    }

    if (total_error > tol) {
        // All remaining segments are below subdivision width; report honestly.
        if (total_error > tol * (1.0 + 1e-12)) {
            QuadResult best{total_value, total_error, std::max(evals, 1L)};
            throw ToleranceNotReached("integrate_adaptive: interval width exhausted before tolerance", best);
        }
    }
    return {total_value, total_error, std::max(evals, 1L)};
}

void check_exponent(double s, const char* which) {
    if (!(s >= 0.0) || s >= 1.0)
        throw std::domain_error(std::string("integrate_adaptive: ") + which +
                                " endpoint exponent must lie in [0, 1)");
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                              EndpointSingularity singularity, long max_evaluations) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("integrate_adaptive: bounds must be finite");
    if (!(a < b)) throw std::domain_error("integrate_adaptive: requires a < b");
    if (!(tol > 0.0)) throw std::domain_error("integrate_adaptive: requires tol > 0");
    check_exponent(singularity.left_exponent, "left");
    check_exponent(singularity.right_exponent, "right");

    const double sl = singularity.left_exponent;
    const double sr = singularity.right_exponent;

    if (sl == 0.0 && sr == 0.0) return adaptive_core(f, a, b, tol, max_evaluations);

    // Substitute u = (x-a)^{1-s} (and mirrored for the right endpoint) so the
    // transformed integrand is bounded.  With singularities at both ends the
    // interval is split at its midpoint first.
    auto left_transformed = [&](double lo, double hi, double s) {
        const double q = 1.0 - s;
        return std::pair<Integrand, std::pair<double, double>>(
            [&f, lo, q](double u) {
                const double x = lo + std::pow(u, 1.0 / q);
                return f(x) * std::pow(u, (1.0 - q) / q) / q;
            },
            {0.0, std::pow(hi - lo, q)});
    };
    auto right_transformed = [&](double lo, double hi, double s) {
        const double q = 1.0 - s;
        return std::pair<Integrand, std::pair<double, double>>(
            [&f, hi, q](double u) {
                const double x = hi - std::pow(u, 1.0 / q);
                return f(x) * std::pow(u, (1.0 - q) / q) / q;
            },
            {0.0, std::pow(hi - lo, q)});
    };

    QuadResult total{0.0, 0.0, 0};
    auto accumulate = [&](QuadResult part) {
        total.value += part.value;
        total.abs_error_estimate += part.abs_error_estimate;
        total.evaluations += part.evaluations;
    };

    try {
        if (sl > 0.0 && sr > 0.0) {
            const double mid = 0.5 * (a + b);
            auto [gl, rl] = left_transformed(a, mid, sl);
            accumulate(adaptive_core(gl, rl.first, rl.second, 0.5 * tol, max_evaluations / 2));
            auto [gr, rr] = right_transformed(mid, b, sr);
            accumulate(adaptive_core(gr, rr.first, rr.second, 0.5 * tol, max_evaluations / 2));
        } else if (sl > 0.0) {
            auto [g, range] = left_transformed(a, b, sl);
            accumulate(adaptive_core(g, range.first, range.second, tol, max_evaluations));
        } else {
            auto [g, range] = right_transformed(a, b, sr);
            accumulate(adaptive_core(g, range.first, range.second, tol, max_evaluations));
        }
    } catch (ToleranceNotReached& e) {
        e.best_estimate.value += total.value;
        e.best_estimate.abs_error_estimate += total.abs_error_estimate;
        e.best_estimate.evaluations += total.evaluations;
        throw;
    }
    return total;
}

QuadResult integrate_semi_infinite(const Integrand& f, double tol,
                                   double origin_exponent, double tail_decay_power,
                                   long max_evaluations) {
    if (!(tol > 0.0)) throw std::domain_error("integrate_semi_infinite: requires tol > 0");
    if (!(tail_decay_power > 1.0))
        throw std::domain_error("integrate_semi_infinite: tail decay power must exceed 1");
    // r = t/(1-t), dr = dt/(1-t)^2.  The r ~ t behaviour near the origin means
    // a declared power-law exponent carries over unchanged; a tail f ~ r^{-p}
    // turns into (1-t)^{p-2} at t = 1.
    Integrand g = [&f](double t) {
        if (t >= 1.0) return 0.0;
        const double om = 1.0 - t;
        return f(t / om) / (om * om);
    };
    const double right = tail_decay_power < 2.0 ? 2.0 - tail_decay_power : 0.0;
    return integrate_adaptive(g, 0.0, 1.0, tol, {origin_exponent, right}, max_evaluations);
}

}  // namespace nelsonlab
