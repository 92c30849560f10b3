#include "nelsonlab/phi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nelsonlab/quadrature.hpp"
#include "nelsonlab/special.hpp"

namespace nelsonlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kScanUpper = 50.0;  // phi decays like 1/x; all suprema for a in [-1,1] sit well inside
constexpr int kScanPoints = 1'000'000;

// Cache keyed by parameter values rounded to 12 significant digits.
std::string cache_key(const char* tag, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s:%.11e", tag, v);
    return buf;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, double>& scalar_cache() {
    static std::map<std::string, double> c;
    return c;
}

bool cache_lookup(const std::string& key, double& out) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = scalar_cache().find(key);
    if (it == scalar_cache().end()) return false;
    out = it->second;
    return true;
}

void cache_store(const std::string& key, double value) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    scalar_cache().emplace(key, value);
}

// Golden-section maximisation of g on [lo, hi].
double golden_max(const std::function<double(double)>& g, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = g(c), fd = g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    return std::max(fc, fd);
}

// The grid scan of sup_x |phi(x)| x^a over the 10^6-point grid equals
// exp(max_i [ln|phi(x_i)| + a ln x_i]), a maximum over straight lines in a.
// Building the upper envelope of those lines once makes every subsequent a
// a binary search instead of a fresh scan.
struct ScanEnvelope {
    std::vector<double> slope;      // ln x_i, increasing
    std::vector<double> intercept;  // ln |phi(x_i)|
    std::vector<double> x;          // grid point
    std::vector<double> breakpoint; // hull line i active for a >= breakpoint[i]
    double grid_step = 0.0;

    double argmax_x(double a) const {
        auto it = std::upper_bound(breakpoint.begin(), breakpoint.end(), a);
        const std::size_t idx = static_cast<std::size_t>(it - breakpoint.begin()) - 1;
        return x[idx];
    }
};

const ScanEnvelope& scan_envelope() {
    static const ScanEnvelope env = [] {
        ScanEnvelope e;
        e.grid_step = kScanUpper / kScanPoints;
        std::vector<double> m, b, xs;
        m.reserve(kScanPoints);
        b.reserve(kScanPoints);
        xs.reserve(kScanPoints);
        for (int i = 1; i <= kScanPoints; ++i) {
            const double x = i * e.grid_step;
            const double v = std::abs(phi(x));
            if (v <= 0.0) continue;  // exact zeros never attain the sup
            m.push_back(std::log(x));
            b.push_back(std::log(v));
            xs.push_back(x);
        }
        // Monotone-chain upper envelope; slopes already increasing.
        std::vector<std::size_t> hull;
        std::vector<double> brk;
        auto cross = [&](std::size_t i, std::size_t j) {
            return (b[i] - b[j]) / (m[j] - m[i]);
        };
        for (std::size_t i = 0; i < m.size(); ++i) {
            while (!hull.empty()) {
                const std::size_t last = hull.back();
                if (m[i] == m[last]) {
                    if (b[i] <= b[last]) goto skip;
                    hull.pop_back();
                    brk.pop_back();
                    continue;
                }
                const double a_new = cross(last, i);
                if (!brk.empty() && a_new <= brk.back()) {
                    hull.pop_back();
                    brk.pop_back();
                    continue;
                }
                brk.push_back(a_new);
                break;
            }
            if (hull.empty()) brk.push_back(-std::numeric_limits<double>::infinity());
            hull.push_back(i);
        skip:;
        }
        e.slope.reserve(hull.size());
        for (std::size_t i = 0; i < hull.size(); ++i) {
            e.slope.push_back(m[hull[i]]);
            e.intercept.push_back(b[hull[i]]);
            e.x.push_back(xs[hull[i]]);
        }
        e.breakpoint = brk;
        return e;
    }();
    return env;
}

// k-th zero of sin u - u cos u (tan u = u) in (k pi, (k+1) pi), k >= 1.
double phi_zero(int k) {
    auto g = [](double u) { return std::sin(u) - u * std::cos(u); };
    double lo = k * kPi, hi = (k + 1) * kPi;
    double flo = g(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double compute_one_norm_over_x() {
    // 2 int_0^inf |phi(u)|/u du.  phi has constant sign between consecutive
    // zeros, so each panel integrates phi(u)/u without an |.| kink.  Past the
    // last zero X, |phi(u)/u| = sqrt(1+u^-2) |cos(u + atan(1/u))| / u^2;
    // substituting v = u + atan(1/u) and integrating by parts twice gives
    //   int_X^inf = (2/pi)/V - G(V)/V^2 + O(V^-3),   V = X + atan(1/X),
    // G(v) = int_0^v (|cos t| - 2/pi) dt = 2k + (-1)^k sin v - (2/pi) v,
    // k = floor((v + pi/2)/pi).
    constexpr int kPanels = 1024;
    std::vector<double> zeros(kPanels);
    for (int k = 1; k <= kPanels; ++k) zeros[k - 1] = phi_zero(k);

    auto integrand = [](double u) { return phi(u) / u; };
    double sum = 0.0;
    double lo = 0.0;
    for (int k = 0; k < kPanels; ++k) {
        const double hi = zeros[k];
        sum += std::abs(integrate_adaptive(integrand, lo, hi, 1e-13).value);
        lo = hi;
    }

    const double X = zeros.back();
    const double V = X + std::atan(1.0 / X);
    const int k = static_cast<int>(std::floor((V + kPi / 2.0) / kPi));
    const double G = 2.0 * k + ((k % 2 == 0) ? 1.0 : -1.0) * std::sin(V) - (2.0 / kPi) * V;
    const double tail = (2.0 / kPi) / V - G / (V * V);

    return 2.0 * (sum + tail);
}

}  // namespace

double phi(double x) {
    if (!(x >= 0.0)) throw std::domain_error("phi: requires x >= 0");
    if (x < 0.5) {
        // (sin x - x cos x)/x^2 = sum_{n>=1} (-1)^{n+1} 2n x^{2n-1} / (2n+1)!
        const double x2 = x * x;
        double term = x / 3.0;  // n = 1
        double sum = term;
        for (int n = 2; n < 20; ++n) {
            term *= -x2 / ((2.0 * n + 1.0) * (2.0 * n - 2.0));
            sum += term;
            if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
        }
        return sum;
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x);
}

double phi_weighted_sup(double a) {
    if (!(a >= -1.0) || !(a <= 1.0))
        throw std::domain_error("phi_weighted_sup: phi(x) x^a is unbounded for a outside [-1, 1]");

    const std::string key = cache_key("wsup", a);
    double cached;
    if (cache_lookup(key, cached)) return cached;

    const ScanEnvelope& env = scan_envelope();
    const double x_star = env.argmax_x(a);

    auto g = [a](double x) { return std::abs(phi(x)) * std::pow(x, a); };
    double best = golden_max(g, std::max(0.5 * env.grid_step, x_star - env.grid_step),
                             std::min(kScanUpper, x_star + env.grid_step));
    best = std::max(best, g(x_star));

    // For a = -1 the supremum is the x -> 0 limit phi(x)/x -> 1/3; for a > -1
    // that limit is 0 and the grid already covers the interior maximum.
    if (a == -1.0) best = std::max(best, 1.0 / 3.0);

    cache_store(key, best);
    return best;
}

double f_theta_integral(double theta) {
    if (!(theta > 1.0) || !(theta < 2.0))
        throw std::domain_error("f_theta_integral: requires theta in (1, 2)");
    const std::string key = cache_key("ftheta", theta);
    double cached;
    if (cache_lookup(key, cached)) return cached;

    // Integrand ~ r^{-q} at the origin and ~ 2 r^{-(q+1)} in the tail.
    const double q = (theta - 1.0) / 2.0;
    const double value =
        integrate_semi_infinite([q](double r) { return std::pow(r, -q) / (1.0 + r / 2.0); },
                                1e-12 * (1.0 + 2.0 / q), q, q + 1.0)
            .value;
    cache_store(key, value);
    return value;
}

const PhiNormTable& phi_norms() {
    static const PhiNormTable table = [] {
        PhiNormTable t;
        t.sup_norm = phi_weighted_sup(0.0);
        t.one_norm_over_x = compute_one_norm_over_x();
        return t;
    }();
    return table;
}

ThetaConstants theta_constants(double theta) {
    if (!(theta > 1.0) || !(theta < 2.0))
        throw std::domain_error("theta_constants: requires theta in (1, 2)");
    const double s = 2.0 - theta;
    ThetaConstants out;
    out.a_theta = std::pow(2.0, (3.0 * theta - 2.0) / s) * std::pow(theta, theta / s) * s /
                  std::pow(3.0 - theta, 2.0 * theta / s);
    out.b_theta = theta * gamma_fn((3.0 - theta) / 2.0) /
                  (std::pow(2.0, theta / 2.0) * gamma_fn(1.5));
    return out;
}

DerivedConstants derived_constants(double theta, double phi_param, double epsilon) {
    if (!(theta > 1.0) || !(theta < 2.0))
        throw std::domain_error("derived_constants: requires theta in (1, 2)");
    if (!(phi_param >= 0.0) || !(phi_param < 1.0))
        throw std::domain_error("derived_constants: requires phi_param in [0, 1)");
    if (!(epsilon > 0.0))
        throw std::domain_error("derived_constants: requires epsilon > 0");

    const PhiNormTable& norms = phi_norms();
    DerivedConstants out;
    const ThetaConstants tc = theta_constants(theta);
    out.a_theta = tc.a_theta;
    out.b_theta = tc.b_theta;
    out.c_const = 0.5 * norms.one_norm_over_x;
    out.d_eps = std::pow(2.0, phi_param) * norms.sup_norm * gamma_fn(2.0 - phi_param) /
                ((1.0 - phi_param) * std::pow(epsilon, 1.0 - phi_param));
    out.f_theta = phi_weighted_sup(theta / 2.0) * f_theta_integral(theta) / std::sqrt(2.0);
    return out;
}

}  // namespace nelsonlab
