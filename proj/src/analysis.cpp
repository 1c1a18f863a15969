#include "nlgrad/analysis.hpp"

#include "nlgrad/errors.hpp"
#include "nlgrad/special.hpp"

#include <cmath>
#include <random>

namespace nlgrad {

namespace {

double bump01(double z) { // exp(1 - 1/(1-z^2)) for |z| < 1
    const double z2 = z * z;
    if (z2 >= 1.0) return 0.0;
    const double e = 1.0 - 1.0 / (1.0 - z2);
    return e < -745.0 ? 0.0 : std::exp(e);
}

double bump01_sq(double z) { // squared bump; flatter spectrum, cleaner delta^2 window
    const double b = bump01(z);
    return b * b;
}

// portable uniform in [-1, 1) from raw 64-bit draws
double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    const std::size_t n = lx.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

// ---------------------------------------------------------------------------
// Test fields
// ---------------------------------------------------------------------------

Field make_smooth_bump(const Grid& g, double center_frac, double radius_frac) {
    const double l = g.box_length;
    const double cx = center_frac * l, r = radius_frac * l;
    if (g.dim == 1)
        return Field::from_function(g, [=](double x, double) { return bump01_sq((x - cx) / r); });
    return Field::from_function(g, [=](double x, double y) {
        const double dx = (x - cx) / r, dy = (y - cx) / r;
        return bump01_sq(std::sqrt(dx * dx + dy * dy));
    });
}

Field make_holder_bump(const Grid& g, double alpha) {
    if (g.dim != 1) fail(ErrorKind::UnsupportedDim, "holder bump is 1-d");
    const double l = g.box_length;
    const double cx = 0.5 * l, r = 0.25 * l;
    return Field::from_function(g, [=](double x, double) {
        return bump01((x - cx) / r) * std::pow(std::abs(x - cx), 1.0 + alpha);
    });
}

Field make_w1p_sample(const Grid& g) {
    if (g.dim != 1) fail(ErrorKind::UnsupportedDim, "tent sample is 1-d");
    const double l = g.box_length;
    const double cx = 0.5 * l, r = 0.25 * l;
    return Field::from_function(g, [=](double x, double) { return std::max(0.0, 1.0 - std::abs(x - cx) / r); });
}

Field make_box_bump(const Grid& g, const SupportBox& omega) {
    if (g.dim == 1) {
        const double c = omega.center(0), r = 0.5 * omega.width(0);
        Field f = Field::from_function(g, [=](double x, double) { return bump01((x - c) / r); });
        f.apply_mask(omega);
        return f;
    }
    const double c0 = omega.center(0), r0 = 0.5 * omega.width(0);
    const double c1 = omega.center(1), r1 = 0.5 * omega.width(1);
    Field f = Field::from_function(
        g, [=](double x, double y) { return bump01((x - c0) / r0) * bump01((y - c1) / r1); });
    f.apply_mask(omega);
    return f;
}

Field make_masked_noise(const Grid& g, const SupportBox& omega, int max_mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double l = g.box_length;
    Field noise(g);
    if (g.dim == 1) {
        std::vector<double> a(max_mode + 1), b(max_mode + 1);
        for (int k = 1; k <= max_mode; ++k) {
            a[k] = uniform_pm1(rng);
            b[k] = uniform_pm1(rng);
        }
        noise = Field::from_function(g, [&](double x, double) {
            double acc = 0.0;
            for (int k = 1; k <= max_mode; ++k) {
                const double ang = 2.0 * pi * k * x / l;
                acc += a[k] * std::cos(ang) + b[k] * std::sin(ang);
            }
            return acc;
        });
    } else {
        struct ModeCoef {
            int kx, ky;
            double a, b;
        };
        std::vector<ModeCoef> coefs;
        for (int kx = -max_mode; kx <= max_mode; ++kx)
            for (int ky = 0; ky <= max_mode; ++ky) {
                if (ky == 0 && kx <= 0) continue;
                coefs.push_back({kx, ky, uniform_pm1(rng), uniform_pm1(rng)});
            }
        noise = Field::from_function(g, [&](double x, double y) {
            double acc = 0.0;
            for (const auto& c : coefs) {
                const double ang = 2.0 * pi * (c.kx * x + c.ky * y) / l;
                acc += c.a * std::cos(ang) + c.b * std::sin(ang);
            }
            return acc;
        });
    }
    Field mask = make_box_bump(g, omega);
    Field out(g);
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = mask[i] * noise[i];
    out.apply_mask(omega);
    return out;
}

double lipschitz_constant(const Field& u) {
    if (u.grid().dim != 1) fail(ErrorKind::UnsupportedDim, "lipschitz_constant is 1-d");
    const double h = u.grid().spacing();
    double m = 0.0;
    const std::int64_t n = u.size();
    for (std::int64_t i = 0; i < n; ++i) m = std::max(m, std::abs(u[(i + 1) % n] - u[i]) / h);
    return m;
}

// ---------------------------------------------------------------------------
// Localization rates
// ---------------------------------------------------------------------------

namespace {

RateReport rate_from_errors(std::vector<double> deltas, std::vector<double> errors, double floor) {
    RateReport rep;
    rep.delta = std::move(deltas);
    rep.error = std::move(errors);
    rep.floor = floor;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < rep.delta.size(); ++i) {
        if (rep.error[i] <= 10.0 * floor) {
            rep.dropped.push_back(static_cast<int>(i));
            continue;
        }
        lx.push_back(std::log(rep.delta[i]));
        ly.push_back(std::log(rep.error[i]));
    }
    rep.slope = fit_slope(lx, ly);
    return rep;
}

} // namespace

RateReport localization_rate(const Kernel& k, TestFunctionKind fn, double alpha,
                             std::span<const double> deltas, const Grid& g, double p) {
    g.validate();
    const double h = g.spacing();
    for (double d : deltas) {
        if (!(d > 0.0 && d <= 1.0)) fail(ErrorKind::OutOfRangeDelta, "localization deltas must lie in (0,1]");
        if (d < 4.0 * h)
            fail(ErrorKind::UnresolvedHorizon,
                 "delta = " + std::to_string(d) + " is below 4h = " + std::to_string(4.0 * h));
    }
    Field u;
    std::string subject;
    switch (fn) {
    case TestFunctionKind::SmoothBump:
        u = make_smooth_bump(g);
        subject = "smooth_bump";
        break;
    case TestFunctionKind::HolderBump:
        u = make_holder_bump(g, alpha);
        subject = "holder_bump(alpha=" + std::to_string(alpha) + ")";
        break;
    case TestFunctionKind::W1pSample:
        u = make_w1p_sample(g);
        subject = "w1p_tent";
        break;
    }
    const VectorField ref = classical_gradient(u);
    std::vector<double> errs;
    for (double d : deltas) {
        const ScaledKernel sk(k, d, ScalingRegime::Vanishing);
        OperatorHandle op(SymbolTable::scaled(sk, g));
        errs.push_back(lp_error(op.apply_gradient(u), ref, p));
    }
    const double floor = 1e-12 * lp_norm(ref, p);
    RateReport rep = rate_from_errors({deltas.begin(), deltas.end()}, std::move(errs), floor);
    rep.norm = std::isinf(p) ? "linf" : "l" + std::to_string(p);
    rep.subject = subject;
    return rep;
}

RateReport fractionalization_error(const Kernel& k, const Field& u, std::span<const double> deltas) {
    return fractionalization_error(k, u, deltas, k.s_infinity_estimated());
}

RateReport fractionalization_error(const Kernel& k, const Field& u, std::span<const double> deltas,
                                   double s_inf) {
    const Grid& g = u.grid();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 1.0 / k.epsilon()))
            fail(ErrorKind::OutOfRangeDelta, "fractionalization deltas must exceed 1/epsilon");
        if (i > 0 && !(deltas[i] > deltas[i - 1]))
            fail(ErrorKind::OutOfRangeDelta, "fractionalization deltas must be increasing");
    }
    const VectorField ref = riesz_gradient(u, s_inf);
    std::vector<double> errs;
    for (double d : deltas) {
        const ScaledKernel sk(k, d, ScalingRegime::Diverging);
        OperatorHandle op(SymbolTable::scaled(sk, g));
        errs.push_back(lp_error(op.apply_gradient(u), ref, 2.0));
    }
    const double floor = 1e-12 * lp_norm(ref, 2.0);
    RateReport rep = rate_from_errors({deltas.begin(), deltas.end()}, std::move(errs), floor);
    rep.norm = "l2";
    rep.subject = "fractionalization";
    rep.s_inf = s_inf;
    return rep;
}

// ---------------------------------------------------------------------------
// Poincare scan
// ---------------------------------------------------------------------------

PoincareReport poincare_scan(const Kernel& k, ScalingRegime regime, std::span<const double> deltas,
                             const Grid& g, const SupportBox& omega, int samples, std::uint64_t seed,
                             double p) {
    g.validate();
    if (samples < 16) fail(ErrorKind::ExperimentFailure, "poincare_scan needs at least 16 samples");
    PoincareReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.norm = p == 2.0 ? "hs2" : "lp";

    const int max_mode = g.n_per_axis / 8;
    std::vector<Field> fields;
    std::vector<double> numerators;
    for (int i = 0; i < samples; ++i) {
        Field u = make_masked_noise(g, omega, max_mode, seed + static_cast<std::uint64_t>(i));
        const double nrm = lp_norm(u, 2.0);
        if (nrm < 1e-14) continue; // degenerate sample, skip
        numerators.push_back(p == 2.0 ? hs_norm(u, k.sigma()) : lp_norm(u, p));
        fields.push_back(std::move(u));
    }

    for (double d : deltas) {
        const ScaledKernel sk(k, d, regime);
        OperatorHandle op(SymbolTable::scaled(sk, g));
        double worst = 0.0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const double den = lp_norm(op.apply_gradient(fields[i]), p);
            worst = std::max(worst, numerators[i] / den);
        }
        rep.delta.push_back(d);
        rep.worst_ratio.push_back(worst);
        rep.sup_ratio = std::max(rep.sup_ratio, worst);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Multiplier uniformity
// ---------------------------------------------------------------------------

MultiplierReport multiplier_uniformity(const Kernel& k,
                                       std::span<const std::pair<double, double>> delta_pairs,
                                       double xi_max, int xi_count) {
    MultiplierReport rep;
    rep.xi_max = xi_max;
    std::vector<double> xi(xi_count);
    const double lo = std::log(1e-2), hi = std::log(xi_max);
    for (int i = 0; i < xi_count; ++i) xi[i] = std::exp(lo + (hi - lo) * i / (xi_count - 1));
    for (auto [d1, d2] : delta_pairs) {
        const MultiplierScan scan = multiplier_scan(k, d1, d2, xi);
        rep.pairs.push_back({d1, d2, scan.max_ratio, scan.max_scaled_derivative, scan.worst_xi});
        if (!std::isfinite(scan.max_ratio) || !std::isfinite(scan.max_scaled_derivative)) rep.all_finite = false;
    }
    return rep;
}

} // namespace nlgrad
