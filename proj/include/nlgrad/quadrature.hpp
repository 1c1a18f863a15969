#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace nlgrad {

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 52;
};

// Gauss-Legendre nodes and weights on [-1, 1], generated by Newton iteration.
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};
const GaussRule& gauss_legendre(int npoints);

// Fixed-order Gauss-Legendre panel integral of f on [a, b].
double gauss_panel(const std::function<double(double)>& f, double a, double b, int npoints = 12);

// Adaptive bisection quadrature on a finite interval. Throws QuadratureFailure
// when the depth budget is exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opts = {});

// Integral over (0, A] of an integrand with an integrable power singularity at
// the origin, evaluated in log-radius form:
//   I = \int_0^A F(r) dr = \int_{-inf}^{log A} F(e^t) e^t dt.
// `log_envelope(t)` returns log(E(e^t)) for a positive envelope E with
// F = E * factor, |factor| <= factor_bound, and `factor(t)` the bounded part
// (pass nullptr when F = E). The lower truncation point is found by probing
// the envelope until its contribution is negligible.
double integrate_log_radial(const std::function<double(double)>& log_envelope,
                            const std::function<double(double)>& factor, double log_a,
                            const QuadOptions& opts = {});

} // namespace nlgrad
