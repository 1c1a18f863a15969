#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlgrad {

enum class KernelFamily { TruncatedFractional, LogCorrected, VariableExponent, Riesz, Custom };
enum class CutoffKind { SmoothBump, SharpBump };
enum class ScalingRegime { Vanishing, Diverging };

const char* family_name(KernelFamily f);

// Radial cutoff w with w(0) > 0 and supp w contained in the closed unit ball.
struct CutoffSpec {
    CutoffKind kind = CutoffKind::SmoothBump;
    // SharpBump: flat at 1 on [0, plateau], bump-shaped drop over (plateau, plateau + width).
    double plateau = 0.1;
    double width = 0.005;

    double log_value(double r) const; // log w(r), -inf outside the support
    double value(double r) const;
    double support_radius() const;
};

struct KernelSpec {
    KernelFamily family = KernelFamily::TruncatedFractional;
    int dim = 1;
    double s = 0.5; // fractional exponent (families a, b, Riesz)
    int kappa = +1; // log power (family b)
    // family c: samples of the smooth exponent function s(r); radii must start at 0
    std::vector<double> s_fn_r;
    std::vector<double> s_fn_value;
    CutoffSpec cutoff;
    // family Custom: log rho_raw(e^t) as a function of t = log r, plus declared parameters
    std::function<double(double)> custom_log_profile;
    double custom_sigma = 0.5;
    double custom_gamma = 0.5;
    double custom_support = 1.0;

    void validate() const; // throws Error on invalid specs
};

struct KernelImpl;

// Normalized radial kernel rho with profile rho_bar, int rho dx = n for the
// compactly supported families. Cheap to copy; copies share the lazily built
// profile and symbol caches. All queries are safe to call concurrently.
class Kernel {
public:
    static Kernel make(const KernelSpec& spec);

    const KernelSpec& spec() const;
    int dim() const;
    double sigma() const;
    double gamma() const;
    double epsilon() const;
    double norm_const() const;
    bool compact_support() const;
    double support_radius() const; // 1 for compact families, inf for Riesz

    double rho_bar(double r) const;
    double log_rho_bar(double log_r) const; // log of the normalized profile at r = e^t

    // s_infinity where the family admits a closed form (a, b: s; c: s(0); Riesz: s), NaN otherwise.
    double s_infinity_analytic() const;
    // Extrapolated limit exponent over a default geometric horizon list, cached.
    double s_infinity_estimated() const;

    // Result of the builder's monotonicity verification of the family witness
    // (w/|.|^{1+s} and variants); violation factor 1 means clean.
    bool cutoff_monotone_ok() const;
    double cutoff_monotone_violation() const;

    // Q profile: Q_bar(r) = int_r^inf rho_bar(t)/t dt (closed form for Riesz).
    double q_bar(double r) const;
    double log_q_bar(double log_r) const;
    double q_mass() const; // int Q dx (1 for normalized compact kernels, inf for Riesz)

    // Fourier transform of Q at radius |xi|; cached log-log interpolation for
    // the compact families, closed form for Riesz.
    double qhat(double xi) const;
    // Fresh oscillatory quadrature, bypassing the cache (validation path).
    double qhat_direct(double xi) const;
    // Small-frequency expansion coefficient: qhat(xi) ~ 1 - q2 * xi^2.
    double qhat_q2() const;

    const KernelImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<KernelImpl> impl_;
};

// Kernel scaled to horizon delta: rho_delta = c_delta * rho(./delta) with
// c_delta = delta^{-n} (Vanishing) or rho_bar(1/delta)^{-1} (Diverging).
class ScaledKernel {
public:
    ScaledKernel(Kernel base, double delta, ScalingRegime regime);

    const Kernel& base() const { return base_; }
    double delta() const { return delta_; }
    ScalingRegime regime() const { return regime_; }
    double c_delta() const { return c_delta_; }
    double support_radius() const; // delta for compact families, inf for Riesz

    double rho_bar(double r) const;
    double log_rho_bar(double log_r) const;

    // Q̂_{rho_delta} at radius |xi|; qhat_zero() gives the xi = 0 value.
    double qhat(double xi) const;
    double qhat_zero() const;
    // Fresh quadrature of the scaled profile's transform (validation path).
    double qhat_direct(double xi) const;

private:
    Kernel base_;
    double delta_;
    ScalingRegime regime_;
    double c_delta_;
    double log_c_delta_;
};

inline ScaledKernel scale_kernel(const Kernel& k, double delta, ScalingRegime regime) {
    return ScaledKernel(k, delta, regime);
}

struct HypothesisCheck {
    bool pass = false;
    double constant = 0.0; // monotonicity violation factor (1 = clean) or derivative constant
    double worst_r = 0.0;
};

struct HypothesisReport {
    HypothesisCheck h1_monotone; // r^{n-2} rho_bar decreasing on the full grid
    HypothesisCheck h1_nu;       // largest admissible nu with r^nu f_rho decreasing near 0
    HypothesisCheck h2_k1;       // |f'| r / f bounded (finite differences)
    HypothesisCheck h2_k2;       // |f''| r^2 / f bounded
    HypothesisCheck h3;          // r^{n+sigma-1} rho_bar almost decreasing near 0
    HypothesisCheck h4;          // r^{n+gamma-1} rho_bar almost increasing near 0
    double nu_max = 0.0;
    double window = 0.0; // near-origin checks restricted to r <= window
    bool all_pass() const;
};

// Numeric spot checks of the kernel hypotheses on r_grid (subset of (0,1),
// sorted). Near-origin checks use grid points r <= min(0.2, epsilon).
HypothesisReport check_hypotheses(const Kernel& k, std::span<const double> r_grid, double tol = 1.05);

struct LimitExponent {
    std::vector<double> estimates; // per-delta log-ratio estimates
    double extrapolated = 0.0;     // polynomial extrapolation in 1/log(delta)
};

// Per-horizon estimates of the limiting fractional exponent
// log(rho_bar(1/delta)^{-1} rho_bar(1/(e delta))) - n + 1 and their extrapolation.
LimitExponent limit_exponent(const Kernel& k, std::span<const double> deltas);

// Tightest wedge constants c, C with
//   c min{r^-(n+sigma-1), r^-(n+gamma-1)} <= rho_bar_delta(r) <= C max{...}
// over the given radii (Diverging regime only).
std::pair<double, double> wedge_check(const ScaledKernel& sk, std::span<const double> x_grid);

// || (rho_delta - rho_inf) min{1, |.|^{-1}} ||_{L^1(R^n)} with
// rho_inf = |.|^{-(n+s_inf-1)}; s_inf defaults to the extrapolated estimate.
double l1_distance_to_limit(const Kernel& k, double delta);
double l1_distance_to_limit(const Kernel& k, double delta, double s_inf);

} // namespace nlgrad
