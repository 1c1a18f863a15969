#include "nlgrad/fft.hpp"

#include "nlgrad/parallel.hpp"
#include "nlgrad/special.hpp"

#include <cmath>

namespace nlgrad {

Fft::Fft(int n) : n_(n) {
    bitrev_.resize(n);
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (1 << b)) r |= 1 << (bits - 1 - b);
        bitrev_[i] = r;
    }
    tw_fwd_.resize(n / 2);
    tw_inv_.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * pi * k / n;
        tw_fwd_[k] = {std::cos(ang), std::sin(ang)};
        tw_inv_[k] = {std::cos(ang), -std::sin(ang)};
    }
}

void Fft::transform(std::complex<double>* a, const std::vector<std::complex<double>>& tw) const {
    for (int i = 0; i < n_; ++i) {
        const int j = bitrev_[i];
        if (j > i) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len >> 1;
        const int stride = n_ / len;
        for (int start = 0; start < n_; start += len) {
            for (int k = 0; k < half; ++k) {
                const std::complex<double> w = tw[k * stride];
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

void Fft::forward(std::complex<double>* data) const { transform(data, tw_fwd_); }

void Fft::inverse(std::complex<double>* data) const {
    transform(data, tw_inv_);
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) data[i] *= inv;
}

SpectralTransform::SpectralTransform(const Grid& g) : grid_(g), fft_(g.n_per_axis) { g.validate(); }

void SpectralTransform::forward(const double* real_values, std::complex<double>* modes) const {
    const int n = grid_.n_per_axis;
    if (grid_.dim == 1) {
        for (int i = 0; i < n; ++i) modes[i] = real_values[i];
        fft_.forward(modes);
        return;
    }
    for (std::int64_t i = 0; i < grid_.total(); ++i) modes[i] = real_values[i];
    parallel_for(n, [&](std::int64_t row) { fft_.forward(modes + row * n); }, 4);
    // columns: transpose-free strided transforms via a scratch line per column
    parallel_for(
        n,
        [&](std::int64_t col) {
            std::vector<std::complex<double>> line(n);
            for (int row = 0; row < n; ++row) line[row] = modes[static_cast<std::int64_t>(row) * n + col];
            fft_.forward(line.data());
            for (int row = 0; row < n; ++row) modes[static_cast<std::int64_t>(row) * n + col] = line[row];
        },
        4);
}

double SpectralTransform::inverse(const std::complex<double>* modes, double* real_values) const {
    const int n = grid_.n_per_axis;
    if (grid_.dim == 1) {
        std::vector<std::complex<double>> buf(modes, modes + n);
        fft_.inverse(buf.data());
        double imag_max = 0.0;
        for (int i = 0; i < n; ++i) {
            real_values[i] = buf[i].real();
            imag_max = std::max(imag_max, std::abs(buf[i].imag()));
        }
        return imag_max;
    }
    std::vector<std::complex<double>> buf(modes, modes + grid_.total());
    parallel_for(
        n,
        [&](std::int64_t col) {
            std::vector<std::complex<double>> line(n);
            for (int row = 0; row < n; ++row) line[row] = buf[static_cast<std::int64_t>(row) * n + col];
            fft_.inverse(line.data());
            for (int row = 0; row < n; ++row) buf[static_cast<std::int64_t>(row) * n + col] = line[row];
        },
        4);
    std::vector<double> imag_rows(n, 0.0);
    parallel_for(
        n,
        [&](std::int64_t row) {
            double m = 0.0;
            fft_.inverse(buf.data() + row * n);
            for (int i = 0; i < n; ++i) {
                real_values[row * n + i] = buf[row * n + i].real();
                m = std::max(m, std::abs(buf[row * n + i].imag()));
            }
            imag_rows[row] = m;
        },
        4);
    double imag_max = 0.0;
    for (double m : imag_rows) imag_max = std::max(imag_max, m);
    return imag_max;
}

std::vector<std::complex<double>> dft_reference(const std::vector<std::complex<double>>& in) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            acc += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace nlgrad
