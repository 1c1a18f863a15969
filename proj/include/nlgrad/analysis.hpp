#pragma once

#include "nlgrad/grid.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nlgrad {

// ---- test fields -----------------------------------------------------------

// C-infinity bump exp(2 - 2/(1 - |x-c|^2/R^2)) supported in the ball B_R(c).
Field make_smooth_bump(const Grid& g, double center_frac = 0.5, double radius_frac = 0.375);
// C^{1,alpha} profile: smooth bump times |x - c|^{1+alpha} (1-d).
Field make_holder_bump(const Grid& g, double alpha);
// W^{1,p} sample: piecewise-linear tent (1-d).
Field make_w1p_sample(const Grid& g);
// Band-limited noise (modes <= max_mode) times a smooth bump supported in omega.
Field make_masked_noise(const Grid& g, const SupportBox& omega, int max_mode, std::uint64_t seed);
// Smooth mask equal to a scaled bump supported exactly in omega.
Field make_box_bump(const Grid& g, const SupportBox& omega);

enum class TestFunctionKind { SmoothBump, HolderBump, W1pSample };

// ---- rate studies ----------------------------------------------------------

struct RateReport {
    std::vector<double> delta;
    std::vector<double> error;
    double slope = 0.0; // least-squares log-log fit over the kept points
    double floor = 0.0;
    std::vector<int> dropped; // indices excluded from the fit (near the floor)
    std::string norm;
    std::string subject;
    double s_inf = 0.0; // fractionalization only
};

// || D_{rho_delta} u - grad u || for shrinking horizons; p = infinity for the sup norm.
RateReport localization_rate(const Kernel& k, TestFunctionKind fn, double alpha,
                             std::span<const double> deltas, const Grid& g, double p);

// || D_{rho_delta} u - D^{s_inf} u ||_{L^2} for growing horizons.
RateReport fractionalization_error(const Kernel& k, const Field& u, std::span<const double> deltas);
RateReport fractionalization_error(const Kernel& k, const Field& u, std::span<const double> deltas,
                                   double s_inf);

// Sup-norm Lipschitz constant of the grid restriction of a 1-d field.
double lipschitz_constant(const Field& u);

// ---- Poincare scan ---------------------------------------------------------

struct PoincareReport {
    std::vector<double> delta;
    std::vector<double> worst_ratio; // per delta, max over samples of ||u||_* / ||D u||_p
    double sup_ratio = 0.0;
    std::string norm; // "hs2" (spectral <xi>^sigma, p=2) or "lp"
    int samples = 0;
    std::uint64_t seed = 0;
};

PoincareReport poincare_scan(const Kernel& k, ScalingRegime regime, std::span<const double> deltas,
                             const Grid& g, const SupportBox& omega, int samples, std::uint64_t seed,
                             double p = 2.0);

// ---- multiplier uniformity -------------------------------------------------

struct MultiplierPairResult {
    double d1 = 0.0, d2 = 0.0;
    double max_ratio = 0.0;
    double max_scaled_derivative = 0.0;
    double worst_xi = 0.0;
};

struct MultiplierReport {
    std::vector<MultiplierPairResult> pairs;
    double xi_max = 0.0;
    bool all_finite = true;
};

MultiplierReport multiplier_uniformity(const Kernel& k,
                                       std::span<const std::pair<double, double>> delta_pairs,
                                       double xi_max, int xi_count = 160);

} // namespace nlgrad
