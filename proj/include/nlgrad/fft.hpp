#pragma once

#include "nlgrad/grid.hpp"

#include <complex>
#include <vector>

namespace nlgrad {

// Iterative radix-2 complex FFT with precomputed twiddles (N power of two).
class Fft {
public:
    explicit Fft(int n);

    int size() const { return n_; }
    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const; // includes the 1/N factor

private:
    void transform(std::complex<double>* data, const std::vector<std::complex<double>>& tw) const;

    int n_;
    std::vector<int> bitrev_;
    std::vector<std::complex<double>> tw_fwd_, tw_inv_;
};

// Real field <-> complex spectral coefficients on a Grid; 2-d transforms run
// rows and columns as independent 1-d FFTs (parallelized).
class SpectralTransform {
public:
    explicit SpectralTransform(const Grid& g);

    const Grid& grid() const { return grid_; }
    // modes must hold grid.total() complex values
    void forward(const double* real_values, std::complex<double>* modes) const;
    // writes the real part, reports the largest |imag| seen (conjugate-symmetry check)
    double inverse(const std::complex<double>* modes, double* real_values) const;

private:
    Grid grid_;
    Fft fft_;
};

// O(N^2) reference DFT used by the tests to validate the FFT.
std::vector<std::complex<double>> dft_reference(const std::vector<std::complex<double>>& in);

} // namespace nlgrad
