#pragma once

namespace cstrip::bessel {

// Cylinder functions of order 0 and 1. Ascending series (long double) for
// small arguments, Hankel asymptotic expansions for large ones.
double j0(double x);
double j1(double x);
// x > 0
double y0(double x);
double y1(double x);

// Exponentially scaled modified functions: e^{-x} I_n(x) and e^{x} K_n(x),
// x >= 0 (x > 0 for K). Unscaled values overflow long before the annulus
// cross-products do.
double i0e(double x);
double i1e(double x);
double k0e(double x);
double k1e(double x);

// First zero of J0.
inline constexpr double j0_first_zero = 2.404825557695772768621631879;

}  // namespace cstrip::bessel
