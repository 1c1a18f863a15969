#include "nlgrad/special.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace nlgrad {

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double bessel_j1(double x) {
    const double v = std::cyl_bessel_j(1.0, std::abs(x));
    return x < 0 ? -v : v;
}

double bessel_j0_zero(int k) {
    static std::mutex mtx;
    static std::vector<double> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (k <= static_cast<int>(cache.size())) return cache[k - 1];
    }
    // McMahon expansion, then two Newton steps with J0' = -J1.
    const double beta = (k - 0.25) * pi;
    const double b2 = beta * beta;
    double x = beta + 1.0 / (8.0 * beta) * (1.0 - 124.0 / (3.0 * 8.0 * 8.0 * b2) +
                                            120928.0 / (15.0 * 8.0 * 8.0 * 8.0 * 8.0 * b2 * b2));
    for (int i = 0; i < 3; ++i) {
        const double f = bessel_j0(x);
        const double fp = -bessel_j1(x);
        if (fp != 0.0) x -= f / fp;
    }
    std::lock_guard<std::mutex> lock(mtx);
    if (k > static_cast<int>(cache.size())) {
        // fill sequentially so the cache stays dense
        for (int j = static_cast<int>(cache.size()) + 1; j <= k; ++j) {
            if (j == k) {
                cache.push_back(x);
            } else {
                const double bj = (j - 0.25) * pi;
                double xj = bj + 1.0 / (8.0 * bj);
                for (int i = 0; i < 3; ++i) {
                    const double f = bessel_j0(xj);
                    const double fp = -bessel_j1(xj);
                    if (fp != 0.0) xj -= f / fp;
                }
                cache.push_back(xj);
            }
        }
    }
    return x;
}

} // namespace nlgrad
