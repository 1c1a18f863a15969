#include "nlgrad/kernels.hpp"

#include "kernel_impl.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/quadrature.hpp"
#include "nlgrad/special.hpp"

#include <algorithm>
#include <cmath>

namespace nlgrad {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

double sphere_area(int n) { return n == 1 ? 2.0 : 2.0 * pi; }

// Polynomial extrapolation at x = 0 through the points (x_i, y_i) (Neville).
double neville_at_zero(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

} // namespace

const char* family_name(KernelFamily f) {
    switch (f) {
    case KernelFamily::TruncatedFractional: return "truncated_fractional";
    case KernelFamily::LogCorrected: return "log_corrected";
    case KernelFamily::VariableExponent: return "variable_exponent";
    case KernelFamily::Riesz: return "riesz";
    case KernelFamily::Custom: return "custom";
    }
    return "?";
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::NormalizationFailure: return "NormalizationFailure";
    case ErrorKind::OutOfRangeDelta: return "OutOfRangeDelta";
    case ErrorKind::ZeroProfile: return "ZeroProfile";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SingularSymbol: return "SingularSymbol";
    case ErrorKind::HorizonTooLarge: return "HorizonTooLarge";
    case ErrorKind::UnresolvedHorizon: return "UnresolvedHorizon";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::ExperimentFailure: return "ExperimentFailure";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Cutoff
// ---------------------------------------------------------------------------

double CutoffSpec::log_value(double r) const {
    switch (kind) {
    case CutoffKind::SmoothBump:
        if (r >= 1.0) return neg_inf;
        return 1.0 - 1.0 / (1.0 - r * r);
    case CutoffKind::SharpBump: {
        if (r <= plateau) return 0.0;
        const double z = (r - plateau) / width;
        if (z >= 1.0) return neg_inf;
        return 1.0 - 1.0 / (1.0 - z * z);
    }
    }
    return neg_inf;
}

double CutoffSpec::value(double r) const {
    const double lv = log_value(r);
    return lv == neg_inf ? 0.0 : std::exp(lv);
}

double CutoffSpec::support_radius() const {
    return kind == CutoffKind::SmoothBump ? 1.0 : plateau + width;
}

// ---------------------------------------------------------------------------
// Spec validation
// ---------------------------------------------------------------------------

void KernelSpec::validate() const {
    if (dim != 1 && dim != 2) fail(ErrorKind::UnsupportedDim, "dim must be 1 or 2, got " + std::to_string(dim));
    switch (family) {
    case KernelFamily::TruncatedFractional:
    case KernelFamily::LogCorrected:
    case KernelFamily::Riesz:
        if (!(s > 0.0 && s < 1.0))
            fail(ErrorKind::NormalizationFailure, "fractional exponent s must lie in (0,1), got " + std::to_string(s));
        break;
    case KernelFamily::VariableExponent: {
        if (s_fn_r.size() < 2 || s_fn_r.size() != s_fn_value.size())
            fail(ErrorKind::NormalizationFailure, "family c needs matching s_fn_r / s_fn_value samples (>= 2)");
        if (s_fn_r.front() != 0.0) fail(ErrorKind::NormalizationFailure, "s_fn_r must start at 0");
        for (std::size_t i = 0; i + 1 < s_fn_r.size(); ++i)
            if (!(s_fn_r[i] < s_fn_r[i + 1])) fail(ErrorKind::NormalizationFailure, "s_fn_r must be increasing");
        for (double v : s_fn_value)
            if (!(v > 0.0 && v < 1.0)) fail(ErrorKind::NormalizationFailure, "s_fn samples must lie in (0,1)");
        break;
    }
    case KernelFamily::Custom:
        if (!custom_log_profile) fail(ErrorKind::NormalizationFailure, "custom family needs a profile callable");
        if (!(custom_sigma > 0.0 && custom_sigma <= custom_gamma && custom_gamma < 1.0))
            fail(ErrorKind::NormalizationFailure, "custom family needs 0 < sigma <= gamma < 1");
        break;
    }
    if (family == KernelFamily::LogCorrected && kappa != 1 && kappa != -1)
        fail(ErrorKind::NormalizationFailure, "family b needs kappa in {-1, +1}");
    if (family != KernelFamily::Riesz && family != KernelFamily::Custom) {
        if (cutoff.support_radius() > 1.0 + 1e-12)
            fail(ErrorKind::NormalizationFailure, "cutoff support must stay inside the unit ball");
        if (!(cutoff.value(0.0) > 0.0)) fail(ErrorKind::NormalizationFailure, "cutoff must satisfy w(0) > 0");
    }
}

// ---------------------------------------------------------------------------
// Profile evaluation
// ---------------------------------------------------------------------------

double KernelImpl::s_at(double r) const {
    const double r_hi = s_interp.x_max();
    double v = s_interp(std::clamp(r, 0.0, r_hi));
    return std::clamp(v, 0.005, 0.995);
}

double KernelImpl::log_rho_raw(double t) const {
    const double n_ = static_cast<double>(n);
    switch (spec.family) {
    case KernelFamily::TruncatedFractional: {
        const double lw = spec.cutoff.log_value(std::exp(t));
        if (lw == neg_inf) return neg_inf;
        return lw - (n_ + spec.s - 1.0) * t;
    }
    case KernelFamily::LogCorrected: {
        if (t >= 0.0) return neg_inf;
        const double lw = spec.cutoff.log_value(std::exp(t));
        if (lw == neg_inf) return neg_inf;
        return lw + spec.kappa * std::log(-t) - (n_ + spec.s - 1.0) * t;
    }
    case KernelFamily::VariableExponent: {
        const double r = std::exp(t);
        const double lw = spec.cutoff.log_value(r);
        if (lw == neg_inf) return neg_inf;
        return lw - (n_ + s_at(r) - 1.0) * t;
    }
    case KernelFamily::Riesz:
        return -(n_ + spec.s - 1.0) * t;
    case KernelFamily::Custom:
        return spec.custom_log_profile(t);
    }
    return neg_inf;
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

Kernel Kernel::make(const KernelSpec& spec) {
    spec.validate();
    auto impl = std::make_shared<KernelImpl>();
    impl->spec = spec;
    impl->n = spec.dim;

    if (spec.family == KernelFamily::VariableExponent)
        impl->s_interp = Pchip(spec.s_fn_r, spec.s_fn_value);

    switch (spec.family) {
    case KernelFamily::TruncatedFractional:
        impl->sigma = impl->gamma = spec.s;
        impl->s_inf_analytic = spec.s;
        impl->support = spec.cutoff.support_radius();
        break;
    case KernelFamily::LogCorrected:
        if (spec.kappa == 1) {
            impl->sigma = spec.s;
            impl->gamma = 0.5 * (spec.s + 1.0);
        } else {
            impl->sigma = 0.5 * spec.s;
            impl->gamma = spec.s;
        }
        impl->s_inf_analytic = spec.s;
        impl->support = spec.cutoff.support_radius();
        break;
    case KernelFamily::VariableExponent: {
        double lo = 1.0, hi = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = impl->s_at(i / 1000.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        impl->sigma = lo;
        impl->gamma = hi;
        impl->s_inf_analytic = impl->s_at(0.0);
        impl->support = spec.cutoff.support_radius();
        break;
    }
    case KernelFamily::Riesz:
        impl->sigma = impl->gamma = spec.s;
        impl->s_inf_analytic = spec.s;
        impl->compact = false;
        impl->support = std::numeric_limits<double>::infinity();
        impl->epsilon = std::numeric_limits<double>::infinity();
        break;
    case KernelFamily::Custom:
        impl->sigma = spec.custom_sigma;
        impl->gamma = spec.custom_gamma;
        impl->support = spec.custom_support;
        impl->compact = std::isfinite(spec.custom_support);
        break;
    }
    if (impl->compact) impl->epsilon = std::min(1.0, impl->support);

    // Normalize so that int rho dx = n (compact families; Riesz keeps coefficient 1).
    if (impl->compact) {
        double mass;
        try {
            mass = sphere_area(impl->n) *
                   integrate_log_radial([&](double t) { return impl->log_rho_raw(t) + (impl->n - 1) * t; }, nullptr,
                                        std::log(impl->support));
        } catch (const Error& e) {
            fail(ErrorKind::NormalizationFailure, std::string("kernel mass quadrature failed: ") + e.what());
        }
        if (!(mass > 0.0) || !std::isfinite(mass))
            fail(ErrorKind::NormalizationFailure, "kernel mass integral is not positive and finite");
        impl->norm_const = impl->n / mass;
        impl->log_norm = std::log(impl->norm_const);
    }

    // Verify the family's monotonicity precondition on the cutoff witness
    // (w/|.|^{1+s} and variants, radially decreasing); report only.
    if (spec.family != KernelFamily::Riesz && spec.family != KernelFamily::Custom) {
        auto log_witness = [&](double t) {
            const double r = std::exp(t);
            const double lw = spec.cutoff.log_value(r);
            if (lw == neg_inf) return neg_inf;
            switch (spec.family) {
            case KernelFamily::TruncatedFractional: return lw - (1.0 + spec.s) * t;
            case KernelFamily::LogCorrected: return lw + spec.kappa * std::log(-t) - (1.0 + spec.s) * t;
            default: return lw - (1.0 + impl->s_at(r)) * t;
            }
        };
        const double t_lo = std::log(1e-6);
        const double t_hi = std::log(impl->support * (1.0 - 1e-9));
        double run_min = std::numeric_limits<double>::infinity();
        double worst = 0.0;
        const int m = 400;
        for (int i = 0; i <= m; ++i) {
            const double lv = log_witness(t_lo + (t_hi - t_lo) * i / m);
            if (lv == neg_inf) continue;
            worst = std::max(worst, lv - run_min);
            run_min = std::min(run_min, lv);
        }
        impl->cutoff_monotone_violation = std::exp(std::max(worst, 0.0));
        impl->cutoff_monotone_ok = impl->cutoff_monotone_violation <= 1.0 + 1e-9;
    }

    Kernel k;
    k.impl_ = std::move(impl);
    return k;
}

const KernelSpec& Kernel::spec() const { return impl_->spec; }
int Kernel::dim() const { return impl_->n; }
double Kernel::sigma() const { return impl_->sigma; }
double Kernel::gamma() const { return impl_->gamma; }
double Kernel::epsilon() const { return impl_->epsilon; }
double Kernel::norm_const() const { return impl_->norm_const; }
bool Kernel::compact_support() const { return impl_->compact; }
double Kernel::support_radius() const { return impl_->support; }
double Kernel::s_infinity_analytic() const { return impl_->s_inf_analytic; }
bool Kernel::cutoff_monotone_ok() const { return impl_->cutoff_monotone_ok; }
double Kernel::cutoff_monotone_violation() const { return impl_->cutoff_monotone_violation; }

double Kernel::log_rho_bar(double log_r) const { return impl_->log_rho(log_r); }

double Kernel::rho_bar(double r) const {
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    const double lv = impl_->log_rho(std::log(r));
    return lv == neg_inf ? 0.0 : std::exp(lv);
}

double Kernel::s_infinity_estimated() const {
    std::lock_guard<std::mutex> lock(impl_->mtx);
    if (std::isnan(impl_->s_inf_est)) {
        const double lo = std::max(1e2, 2.0 / impl_->epsilon);
        std::vector<double> deltas;
        for (int i = 0; i < 5; ++i) deltas.push_back(lo * std::pow(10.0, i));
        impl_->s_inf_est = limit_exponent(*this, deltas).extrapolated;
    }
    return impl_->s_inf_est;
}

// ---------------------------------------------------------------------------
// Scaled kernels
// ---------------------------------------------------------------------------

ScaledKernel::ScaledKernel(Kernel base, double delta, ScalingRegime regime)
    : base_(std::move(base)), delta_(delta), regime_(regime) {
    if (!(delta > 0.0)) fail(ErrorKind::OutOfRangeDelta, "delta must be positive");
    if (regime == ScalingRegime::Vanishing) {
        if (delta > 1.0)
            fail(ErrorKind::OutOfRangeDelta, "Vanishing regime requires delta in (0,1], got " + std::to_string(delta));
        c_delta_ = std::pow(delta, -base_.dim());
        log_c_delta_ = -base_.dim() * std::log(delta);
    } else {
        if (!(delta > 1.0 / base_.epsilon()))
            fail(ErrorKind::OutOfRangeDelta,
                 "Diverging regime requires delta > 1/epsilon = " + std::to_string(1.0 / base_.epsilon()));
        const double lr = base_.log_rho_bar(-std::log(delta));
        if (lr == neg_inf) fail(ErrorKind::OutOfRangeDelta, "rho_bar(1/delta) vanishes for this delta");
        log_c_delta_ = -lr;
        c_delta_ = std::exp(log_c_delta_);
    }
}

double ScaledKernel::support_radius() const {
    return base_.compact_support() ? delta_ * base_.support_radius() : std::numeric_limits<double>::infinity();
}

double ScaledKernel::log_rho_bar(double log_r) const {
    const double lv = base_.log_rho_bar(log_r - std::log(delta_));
    return lv == neg_inf ? neg_inf : log_c_delta_ + lv;
}

double ScaledKernel::rho_bar(double r) const {
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    const double lv = log_rho_bar(std::log(r));
    return lv == neg_inf ? 0.0 : std::exp(lv);
}

double ScaledKernel::qhat_zero() const {
    if (!base_.compact_support()) return std::numeric_limits<double>::infinity();
    if (regime_ == ScalingRegime::Vanishing) return 1.0;
    return std::exp(base_.dim() * std::log(delta_) + log_c_delta_);
}

double ScaledKernel::qhat(double xi) const {
    if (xi == 0.0) return qhat_zero();
    const double base_val = base_.qhat(delta_ * xi);
    if (regime_ == ScalingRegime::Vanishing) return base_val;
    return std::exp(base_.dim() * std::log(delta_) + log_c_delta_) * base_val;
}

double ScaledKernel::qhat_direct(double xi) const {
    if (xi == 0.0) return qhat_zero();
    auto log_qbar = [this](double t) { return scaled_log_qbar(*this, t); };
    const double support = support_radius();
    return radial_fourier(log_qbar, support, base_.dim(), xi);
}

// ---------------------------------------------------------------------------
// Hypothesis checks
// ---------------------------------------------------------------------------

namespace {

// Largest factor by which `values` rises above its running minimum (log scale in, factor out).
std::pair<double, double> rise_factor(std::span<const double> r, std::span<const double> logv) {
    double run_min = std::numeric_limits<double>::infinity();
    double worst = 0.0, worst_r = r.empty() ? 0.0 : r[0];
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (logv[i] == neg_inf) continue;
        if (logv[i] - run_min > worst) {
            worst = logv[i] - run_min;
            worst_r = r[i];
        }
        run_min = std::min(run_min, logv[i]);
    }
    return {std::exp(std::max(worst, 0.0)), worst_r};
}

std::pair<double, double> fall_factor(std::span<const double> r, std::span<const double> logv) {
    double run_max = neg_inf;
    double worst = 0.0, worst_r = r.empty() ? 0.0 : r[0];
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (logv[i] == neg_inf) continue;
        if (run_max - logv[i] > worst) {
            worst = run_max - logv[i];
            worst_r = r[i];
        }
        run_max = std::max(run_max, logv[i]);
    }
    return {std::exp(std::max(worst, 0.0)), worst_r};
}

} // namespace

bool HypothesisReport::all_pass() const {
    return h1_monotone.pass && h1_nu.pass && h2_k1.pass && h2_k2.pass && h3.pass && h4.pass;
}

HypothesisReport check_hypotheses(const Kernel& k, std::span<const double> r_grid, double tol) {
    HypothesisReport rep;
    rep.window = std::min(0.2, k.epsilon());
    const int n = k.dim();
    const double derivative_cap = 1e3;

    std::vector<double> r_all(r_grid.begin(), r_grid.end());
    std::vector<double> log_f(r_all.size());
    for (std::size_t i = 0; i < r_all.size(); ++i)
        log_f[i] = k.log_rho_bar(std::log(r_all[i])) + (n - 2) * std::log(r_all[i]);

    // (H1) first part: f_rho decreasing on the whole grid.
    {
        auto [factor, worst] = rise_factor(r_all, log_f);
        rep.h1_monotone = {factor <= 1.0 + 1e-9, factor, worst};
    }

    std::vector<double> r_w, log_f_w;
    for (std::size_t i = 0; i < r_all.size(); ++i)
        if (r_all[i] <= rep.window) {
            r_w.push_back(r_all[i]);
            log_f_w.push_back(log_f[i]);
        }

    // (H1) second part: largest nu with r^nu f_rho decreasing near the origin.
    {
        double nu_max = std::numeric_limits<double>::infinity();
        double worst = r_w.empty() ? 0.0 : r_w[0];
        for (std::size_t i = 0; i + 1 < r_w.size(); ++i) {
            if (log_f_w[i] == neg_inf || log_f_w[i + 1] == neg_inf) continue;
            const double slope =
                (log_f_w[i + 1] - log_f_w[i]) / (std::log(r_w[i + 1]) - std::log(r_w[i]));
            if (-slope < nu_max) {
                nu_max = -slope;
                worst = r_w[i];
            }
        }
        if (!std::isfinite(nu_max)) nu_max = 0.0;
        rep.nu_max = nu_max;
        rep.h1_nu = {nu_max > 0.0, nu_max, worst};
    }

    // (H2) derivative bounds for k = 1, 2 via central differences, near the origin.
    {
        auto f_of = [&](double r) {
            const double lv = k.log_rho_bar(std::log(r)) + (n - 2) * std::log(r);
            return lv == neg_inf ? 0.0 : std::exp(lv);
        };
        double c1 = 0.0, c2 = 0.0, w1 = 0.0, w2 = 0.0;
        for (double r : r_w) {
            const double h = r * 1e-4;
            const double fm = f_of(r - h), f0 = f_of(r), fp = f_of(r + h);
            if (f0 <= 0.0) continue;
            const double d1 = (fp - fm) / (2.0 * h);
            const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
            const double v1 = std::abs(d1) * r / f0;
            const double v2 = std::abs(d2) * r * r / f0;
            if (v1 > c1) {
                c1 = v1;
                w1 = r;
            }
            if (v2 > c2) {
                c2 = v2;
                w2 = r;
            }
        }
        rep.h2_k1 = {c1 <= derivative_cap, c1, w1};
        rep.h2_k2 = {c2 <= derivative_cap, c2, w2};
    }

    // (H3)/(H4): almost monotonicity of r^{n+sigma-1} rho and r^{n+gamma-1} rho near the origin.
    {
        std::vector<double> g3(r_w.size()), g4(r_w.size());
        for (std::size_t i = 0; i < r_w.size(); ++i) {
            const double t = std::log(r_w[i]);
            const double lr = k.log_rho_bar(t);
            g3[i] = lr == neg_inf ? neg_inf : lr + (n + k.sigma() - 1.0) * t;
            g4[i] = lr == neg_inf ? neg_inf : lr + (n + k.gamma() - 1.0) * t;
        }
        auto [v3, w3] = rise_factor(r_w, g3);
        auto [v4, w4] = fall_factor(r_w, g4);
        rep.h3 = {v3 <= tol, v3, w3};
        rep.h4 = {v4 <= tol, v4, w4};
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Limit exponent
// ---------------------------------------------------------------------------

LimitExponent limit_exponent(const Kernel& k, std::span<const double> deltas) {
    LimitExponent out;
    std::vector<double> x;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        if (!(d > 1.0) || !(d > 1.0 / k.epsilon()))
            fail(ErrorKind::OutOfRangeDelta, "limit_exponent needs delta > max(1, 1/epsilon)");
        if (i > 0 && !(d > deltas[i - 1])) fail(ErrorKind::OutOfRangeDelta, "delta list must be increasing");
        const double l0 = k.log_rho_bar(-std::log(d));
        if (l0 == neg_inf) fail(ErrorKind::ZeroProfile, "rho_bar(1/delta) = 0 at delta = " + std::to_string(d));
        const double l1 = k.log_rho_bar(-1.0 - std::log(d));
        out.estimates.push_back(l1 - l0 - k.dim() + 1.0);
        x.push_back(1.0 / std::log(d));
    }
    out.extrapolated = out.estimates.size() == 1 ? out.estimates[0] : neville_at_zero(x, out.estimates);
    return out;
}

// ---------------------------------------------------------------------------
// Wedge bounds
// ---------------------------------------------------------------------------

std::pair<double, double> wedge_check(const ScaledKernel& sk, std::span<const double> x_grid) {
    if (sk.regime() != ScalingRegime::Diverging)
        fail(ErrorKind::OutOfRangeDelta, "wedge_check applies to the Diverging regime");
    const int n = sk.base().dim();
    const double sig = sk.base().sigma(), gam = sk.base().gamma();
    const double r_max = sk.delta() * sk.base().epsilon();
    double c_low = std::numeric_limits<double>::infinity();
    double c_high = 0.0;
    for (double r : x_grid) {
        if (!(r > 0.0) || !(r < r_max)) continue;
        const double t = std::log(r);
        const double lv = sk.log_rho_bar(t);
        const double lo_branch = -std::max((n + sig - 1.0) * t, (n + gam - 1.0) * t); // log min{...}
        const double hi_branch = -std::min((n + sig - 1.0) * t, (n + gam - 1.0) * t); // log max{...}
        if (lv == neg_inf) {
            c_low = 0.0;
            continue;
        }
        c_low = std::min(c_low, std::exp(lv - lo_branch));
        c_high = std::max(c_high, std::exp(lv - hi_branch));
    }
    return {c_low, c_high};
}

// ---------------------------------------------------------------------------
// L1 distance to the fractional limit kernel
// ---------------------------------------------------------------------------

double l1_distance_to_limit(const Kernel& k, double delta) {
    return l1_distance_to_limit(k, delta, k.s_infinity_estimated());
}

double l1_distance_to_limit(const Kernel& k, double delta, double s_inf) {
    if (!(delta > 1.0 / k.epsilon()) || !(delta > 1.0))
        fail(ErrorKind::OutOfRangeDelta, "l1_distance_to_limit needs a Diverging-admissible delta");
    const ScaledKernel sk(k, delta, ScalingRegime::Diverging);
    const int n = k.dim();
    const double area = sphere_area(n);
    const double limit_exp = n + s_inf - 1.0;

    auto log_delta_part = [&](double t) { return sk.log_rho_bar(t); };
    auto log_limit_part = [&](double t) { return -limit_exp * t; };
    // integrand = |A - B| * min(1, 1/r) * r^{n-1}; envelope A + B, factor |A-B|/(A+B)
    auto log_envelope = [&](double t) {
        const double la = log_delta_part(t);
        const double lb = log_limit_part(t);
        const double m = std::max(la, lb);
        const double lsum = m + std::log1p(std::exp(std::min(la, lb) - m));
        return lsum + (n - 1) * t + std::min(0.0, -t); // min(1,1/r) in log form
    };
    auto factor = [&](double t) {
        const double la = log_delta_part(t);
        const double lb = log_limit_part(t);
        if (la == neg_inf && lb == neg_inf) return 0.0;
        const double m = std::max(la, lb);
        const double a = la == neg_inf ? 0.0 : std::exp(la - m);
        const double b = lb == neg_inf ? 0.0 : std::exp(lb - m);
        return std::abs(a - b) / (a + b);
    };

    const double support = sk.support_radius();
    const double inner_top = std::isfinite(support) ? support : std::max(8.0 * delta, 16.0);

    QuadOptions opts;
    // (0, 1]: singular head in log-radius form
    double total = integrate_log_radial(log_envelope, factor, 0.0, opts);
    // [1, inner_top]: smooth in t = log r
    total += integrate(
        [&](double t) {
            const double e = log_envelope(t) + t;
            return e < -745.0 ? 0.0 : std::exp(e) * factor(t);
        },
        0.0, std::log(inner_top), opts);
    // analytic tail of the limit kernel beyond the support
    if (std::isfinite(support)) {
        total += std::pow(inner_top, -s_inf) / s_inf;
    } else {
        // both kernels fractional beyond inner_top: same tail estimate on the difference
        const double tail = integrate(
            [&](double t) {
                const double e = log_envelope(t) + t;
                return e < -745.0 ? 0.0 : std::exp(e) * factor(t);
            },
            std::log(inner_top), std::log(inner_top) + 12.0, opts);
        total += tail;
    }
    return area * total;
}

} // namespace nlgrad
