#include "nlgrad/quadrature.hpp"

#include "nlgrad/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace nlgrad {

namespace {

GaussRule build_gauss_rule(int n) {
    GaussRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and derivative.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.node[i] = -x;
        rule.node[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weight[i] = w;
        rule.weight[n - 1 - i] = w;
    }
    return rule;
}

double panel(const std::function<double(double)>& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.node.size(); ++i) acc += rule.weight[i] * f(mid + half * rule.node[i]);
    return acc * half;
}

struct AdaptiveState {
    const std::function<double(double)>& f;
    const GaussRule& low;
    const GaussRule& high;
    double rel_tol;
    int max_depth;
    double scale = 0.0; // running magnitude estimate for the relative criterion
};

// Order-doubling error estimate per panel; bisect until both the absolute
// budget and the relative criterion hold. A few levels are always forced so a
// coincidental low/high agreement on an unresolved panel cannot end the
// recursion early.
double adapt(AdaptiveState& st, double a, double b, double tol, int depth) {
    const double v_low = panel(st.f, a, b, st.low);
    const double v_high = panel(st.f, a, b, st.high);
    const double err = std::abs(v_high - v_low);
    st.scale = std::max(st.scale, std::abs(v_high));
    const bool converged = err <= std::max(tol, st.rel_tol * st.scale);
    if ((converged && depth >= 3) || b - a < 1e-300) return v_high;
    if (depth >= st.max_depth) {
        if (converged) return v_high;
        fail(ErrorKind::QuadratureFailure,
             "adaptive quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double mid = 0.5 * (a + b);
    return adapt(st, a, mid, 0.5 * tol, depth + 1) + adapt(st, mid, b, 0.5 * tol, depth + 1);
}

} // namespace

const GaussRule& gauss_legendre(int npoints) {
    static std::mutex mtx;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(npoints);
    if (it == cache.end()) it = cache.emplace(npoints, build_gauss_rule(npoints)).first;
    return it->second;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b, int npoints) {
    return panel(f, a, b, gauss_legendre(npoints));
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opts) {
    if (!(b > a)) return 0.0;
    AdaptiveState st{f, gauss_legendre(12), gauss_legendre(24), opts.rel_tol, opts.max_depth};
    return adapt(st, a, b, opts.abs_tol, 0);
}

double integrate_log_radial(const std::function<double(double)>& log_envelope,
                            const std::function<double(double)>& factor, double log_a,
                            const QuadOptions& opts) {
    // Integrand in t = log r: F(t) = exp(log_envelope(t) + t) * factor(t).
    auto envelope = [&](double t) {
        const double le = log_envelope(t) + t;
        if (le < -745.0) return 0.0;
        const double v = std::exp(le);
        if (!std::isfinite(v))
            fail(ErrorKind::QuadratureFailure, "radial integrand overflows at log r = " + std::to_string(t));
        return v;
    };
    // Probe downward for the truncation point: past the envelope peak and small
    // enough that the remaining tail is negligible. Radii below e^{t_floor} are
    // not representable; a slowly decaying remainder past the floor is
    // completed analytically from the local exponential rate.
    const double t_floor = -700.0;
    const double step = 0.5;
    double peak = 0.0;
    double t_at_peak = log_a;
    double t = log_a;
    double t_min = t_floor;
    bool found = false;
    while (!found && t - step > t_floor) {
        for (int j = 0; j < 120 && t - step > t_floor; ++j) {
            t -= step;
            const double v = envelope(t);
            if (v > peak) {
                peak = v;
                t_at_peak = t;
            }
        }
        const double v_end = envelope(t);
        if (t < t_at_peak && (peak == 0.0 || v_end <= std::max(opts.abs_tol * 1e-3, peak * 1e-18))) {
            t_min = t;
            found = true;
        }
    }
    if (peak == 0.0 && !found) return 0.0;
    double tail = 0.0;
    if (!found) {
        // exponential completion below the floor: F ~ F(t_min) e^{rate (t - t_min)}
        const double f0 = envelope(t_min);
        const double f1 = envelope(t_min + 2.0);
        if (f0 > 0.0 && f1 > f0) {
            tail = f0 / (0.5 * std::log(f1 / f0));
        } else if (f0 > 0.0) {
            fail(ErrorKind::QuadratureFailure, "radial integrand does not decay toward r = 0");
        }
    }
    auto g = [&](double tt) {
        const double e = envelope(tt);
        return factor ? e * factor(tt) : e;
    };
    return tail + integrate(g, t_min, log_a, opts);
}

} // namespace nlgrad
