#pragma once

#include "nlgrad/fft.hpp"
#include "nlgrad/grid.hpp"
#include "nlgrad/profile.hpp"

#include <complex>
#include <memory>
#include <mutex>

namespace nlgrad {

// Spectral realization of D_{rho_delta} on a periodic grid. Gradient symbol is
// m_d(xi) = 2 pi i xi_d qhat(|xi|) with m(0) = 0 and the xi-prefactor zeroed on
// the unpaired Nyquist mode. Concurrent calls on one handle are serialized;
// distinct handles are independent.
class OperatorHandle {
public:
    explicit OperatorHandle(SymbolTable table);

    const Grid& grid() const { return tbl_.grid; }
    const SymbolTable& table() const { return tbl_; }

    VectorField apply_gradient(const Field& u) const;
    Field apply_divergence(const VectorField& psi) const;
    Field apply_Q(const Field& u) const; // spectral multiplication by qhat
    Field apply_P(const Field& v) const; // spectral division by qhat

    // (|m(xi)|^2 + c0)^{-1} spectral smoothing, c0 = smallest nonzero |m|^2 on
    // the grid; the seed metric for quasi-Newton solves on this operator.
    Field apply_inverse_gram(const Field& u) const;

private:
    void check_grid(const Grid& g) const;
    SymbolTable tbl_;
    SpectralTransform plan_;
    std::vector<double> grad_fac_[2]; // per axis: 2 pi xi_d (0 at Nyquist and zero mode)
    std::vector<double> gram_;        // per mode: sum_d (grad_fac_d * qhat)^2
    double gram_reg_ = 1.0;           // smallest nonzero gram value
    double qhat_min_ = 0.0, qhat_max_ = 0.0;
    mutable std::mutex mtx_;
    mutable std::vector<std::complex<double>> mode_u_, mode_c_;
};

VectorField classical_gradient(const Field& u);
VectorField riesz_gradient(const Field& u, double s);

// (2 pi i xi)^order spectral derivative along x (1-d fields).
Field spectral_derivative(const Field& u, int order);

struct QuadParams {
    int gauss_nodes = 32;
    double min_radius_factor = 1e-6; // panels stop at delta * factor * 4^{-refine_level}
    int refine_level = 0;
    int angular_nodes = 32; // 2-d only
};

// Pointwise singular-integral quadrature of the defining formula, evaluated on
// the trigonometric interpolant of u. Ground-truth oracle for apply_gradient.
VectorField direct_gradient_oracle(const Field& u, const ScaledKernel& sk, const QuadParams& quad);

// Riemann-sum norms; p = infinity gives the max norm.
double lp_norm(const Field& u, double p);
double lp_norm(const VectorField& u, double p);
double lp_error(const Field& u, const Field& v, double p);
double lp_error(const VectorField& u, const VectorField& v, double p);

// h^n-weighted inner products
double inner(const Field& u, const Field& v);
double inner(const VectorField& u, const VectorField& v);

// Spectral Bessel-potential norm ||<xi>^sigma u_hat||_2 (p = 2 only).
double hs_norm(const Field& u, double sigma);

} // namespace nlgrad
