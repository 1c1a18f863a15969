#pragma once

#include "nlgrad/grid.hpp"
#include "nlgrad/kernels.hpp"

#include <span>
#include <vector>

namespace nlgrad {

// Coefficient K(n, s) with Q̂_{rho^s}(xi) = K |xi|^{s-1} for the Riesz kernel
// |x|^{-(n+s-1)} (coefficient-1 convention).
double riesz_qhat_coefficient(int n, double s);

enum class SymbolKind { Classical, Scaled, Riesz };

// Per-mode values of Q̂ on a grid's discrete frequencies, immutable after
// construction. The gradient symbol is m(xi) = 2 pi i xi qhat(xi) with m(0) = 0.
struct SymbolTable {
    Grid grid;
    SymbolKind kind = SymbolKind::Classical;
    std::vector<double> qhat;    // size grid.total(), indexed like fields
    double delta = 0.0;          // Scaled tables
    ScalingRegime regime = ScalingRegime::Vanishing;
    double riesz_s = 0.0;        // Riesz tables
    bool singular_at_zero = false;

    static SymbolTable classical(const Grid& g);
    static SymbolTable scaled(const ScaledKernel& sk, const Grid& g);
    static SymbolTable riesz(const Grid& g, double s);

    double freq_mag(std::int64_t idx) const; // |xi| of a flat mode index
};

struct MultiplierScan {
    double max_ratio = 0.0;
    double max_scaled_derivative = 0.0; // sup |xi| |m'(xi)|
    double worst_xi = 0.0;
};

// Scan of m_{d1,d2}(xi) = Q̂(d1 xi)/Q̂(d2 xi) over a frequency grid; d2 = 0
// means the classical gradient (denominator 1).
MultiplierScan multiplier_scan(const Kernel& k, double d1, double d2, std::span<const double> xi_grid);

} // namespace nlgrad
