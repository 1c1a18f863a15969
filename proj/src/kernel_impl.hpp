#pragma once

#include "nlgrad/interp.hpp"
#include "nlgrad/kernels.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace nlgrad {

struct KernelImpl {
    KernelSpec spec;
    int n = 1;
    double log_norm = 0.0;
    double norm_const = 1.0;
    double sigma = 0.5;
    double gamma = 0.5;
    double epsilon = 1.0;
    bool compact = true;
    double support = 1.0; // support radius of rho_bar (inf for Riesz)
    double s_inf_analytic = std::numeric_limits<double>::quiet_NaN();
    bool cutoff_monotone_ok = true;
    double cutoff_monotone_violation = 1.0;
    Pchip s_interp; // family c exponent function

    // log rho_raw(e^t); -inf where the profile vanishes
    double log_rho_raw(double t) const;
    double log_rho(double t) const { return log_norm + log_rho_raw(t); }
    double s_at(double r) const; // family c exponent, clamped

    // ---- lazy caches (profile and symbol), shared across Kernel copies ----
    mutable std::mutex mtx;
    mutable std::shared_ptr<const Pchip> qbar_cache;  // t = log r -> log Q_bar
    mutable double q_mass_cache = std::numeric_limits<double>::quiet_NaN();
    mutable double qhat_q2_cache = std::numeric_limits<double>::quiet_NaN();
    mutable std::shared_ptr<const Pchip> qhat_cache;  // log xi -> log Q_hat
    mutable double qhat_hi = 0.0;                     // top log-xi currently tabulated
    mutable double s_inf_est = std::numeric_limits<double>::quiet_NaN();

    const Pchip& ensure_qbar() const;
    // Ensures the symbol table covers |xi| with at least two ladder nodes of
    // interior margin (so later extensions cannot change answered values);
    // clamped at the hard cap, beyond which the log-log end slope extrapolates.
    std::shared_ptr<const Pchip> ensure_qhat(double xi) const;

    static constexpr double qhat_lo = 1e-4;
    static constexpr double qhat_cap = 1e5;
};

// log Q_bar for the scaled kernel at t = log r (internal helper).
double scaled_log_qbar(const ScaledKernel& sk, double t);

// Oscillatory radial Fourier transform shared by base and scaled profiles:
//   n=1: 2   * int_0^R  exp(log_qbar(t=log r)) cos(2 pi xi r) dr
//   n=2: 2pi * int_0^R  exp(log_qbar(t=log r)) J0(2 pi xi r) r dr
// R = support (may be +inf, then the alternating panel series is accelerated).
double radial_fourier(const std::function<double(double)>& log_qbar, double support, int n, double xi);

} // namespace nlgrad
