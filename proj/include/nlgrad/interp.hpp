#pragma once

#include <vector>

namespace nlgrad {

// Monotone-safe piecewise cubic Hermite interpolation (Fritsch-Carlson slopes).
// Queries outside the node range extrapolate linearly with the end slope.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    bool empty() const { return x_.empty(); }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    const std::vector<double>& nodes() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_, y_, d_;
};

} // namespace nlgrad
