#pragma once

namespace nlgrad {

double bessel_j0(double x);
double bessel_j1(double x);

// k-th positive zero of J0 (k >= 1), McMahon expansion polished by Newton.
double bessel_j0_zero(int k);

inline constexpr double pi = 3.14159265358979323846;

} // namespace nlgrad
