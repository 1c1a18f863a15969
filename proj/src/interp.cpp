#include "nlgrad/interp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace nlgrad {

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    assert(n >= 2 && y_.size() == n);
    d_.resize(n);
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        slope[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = slope[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    // One-sided three-point formula at the ends, clipped for monotonicity.
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0)
            d = 0.0;
        else if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0))
            d = 3.0 * s0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], slope[0], slope[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
}

std::size_t Pchip::segment(double x) const {
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double Pchip::operator()(double x) const {
    if (x < x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x > x_.back()) return y_.back() + d_.back() * (x - x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * d_[i] * (t3 - 2 * t2 + t) + y_[i + 1] * (-2 * t3 + 3 * t2) +
           h * d_[i + 1] * (t3 - t2);
}

double Pchip::derivative(double x) const {
    if (x < x_.front()) return d_.front();
    if (x > x_.back()) return d_.back();
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) + h * d_[i] * (3 * t2 - 4 * t + 1) + y_[i + 1] * (6 * t - 6 * t2) +
            h * d_[i + 1] * (3 * t2 - 2 * t)) /
           h;
}

} // namespace nlgrad
