#pragma once

#include "nlgrad/grid.hpp"
#include "nlgrad/operators.hpp"

#include <span>
#include <string>
#include <vector>

namespace nlgrad {

enum class IntegrandKind { PowerNorm, AnisotropicQuadratic, WeightedPower };

// Integrand f(x, A) with p-growth, complementary datum g, and the constraint
// box Omega. The admissible class is g + fields supported in Omega.
struct Energy {
    double p = 2.0;
    IntegrandKind kind = IntegrandKind::PowerNorm;
    Field g;          // complementary datum, globally defined and smooth
    SupportBox omega; // constraint box strictly inside the torus
    double eps_reg = 1e-8; // smoothing of |A|^{p-2} at A = 0, used when p < 2

    // AnisotropicQuadratic: f = 1/2 A . M(x) A with M spd; empty fields mean identity.
    Field m11, m12, m22;
    // WeightedPower: f = a(x) + c |A|^p
    Field weight_a;
    double weight_c = 1.0;

    // recorded growth constants c |A|^p - C <= f <= C (1 + |A|^p)
    double growth_c = 0.0, growth_C = 0.0;
    void record_growth();
};

struct MinimizeOptions {
    int max_iter = 500;
    double grad_tol = -1.0; // < 0: default 1e-8 * max(1, initial gradient norm)
    int memory = 8;
};

struct MinimizeResult {
    Field u_star; // inner part, supported in Omega
    double energy_value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int line_search_failures = 0;
};

double energy_value(const Energy& e, const Field& u_inner, const OperatorHandle& op);
Field energy_gradient(const Energy& e, const Field& u_inner, const OperatorHandle& op);

// Limited-memory quasi-Newton minimization over the masked variable with
// Armijo backtracking (c1 = 1e-4, shrink 1/2, at most 40 shrinks per step).
MinimizeResult minimize(const Energy& e, const OperatorHandle& op, const Field& init,
                        const MinimizeOptions& opts = {});

// Smallest Ritz value of the masked quadratic form u -> ||D u||_2^2 (power
// iteration on the complementary operator); positive means discrete coercivity.
double smallest_ritz_value(const OperatorHandle& op, const SupportBox& omega, int iters = 200,
                           std::uint64_t seed = 7);

struct GammaReport {
    std::vector<double> delta;
    std::vector<double> distance;   // || u_delta - u_ref ||_2 of the minimizers
    std::vector<double> energy;     // F_delta(u_delta)
    std::vector<int> iterations;
    std::vector<bool> converged;
    std::vector<Field> minimizers;  // inner parts, one per delta
    Field ref_minimizer;
    double ref_energy = 0.0;
    std::string ref_label;          // "classical" or "riesz(s_inf)"
    double s_inf = 0.0;             // diverging sweeps
};

GammaReport gamma_sweep_vanishing(const Kernel& k, const Energy& e, std::span<const double> deltas,
                                  const Grid& g, const MinimizeOptions& opts = {});
GammaReport gamma_sweep_diverging(const Kernel& k, const Energy& e, std::span<const double> deltas,
                                  const Grid& g, const MinimizeOptions& opts = {});

} // namespace nlgrad
