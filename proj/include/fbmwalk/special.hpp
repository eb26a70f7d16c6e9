#pragma once

#include "fbmwalk/hurst.hpp"

namespace fbmwalk {

/// Constants attached to one Hurst index.
struct FbmConstants {
    HurstIndex H;
    double K;  // weight-balancing constant K_H
    double c;  // Mandelbrot-Van Ness scaling constant c_H
};

/// Riemann zeta, zeta(s) = sum_{n>=1} n^(-s), s > 1.
///
/// Euler-Maclaurin with explicit remainder control; absolute error
/// below 1e-13. Throws std::domain_error for s <= 1 + 1e-6 (the series
/// diverges at s = 1 and the guard band rejects near-divergent input).
double zeta(double s);

/// Tail sum zeta_tail(s, k0) = sum_{n>=k0} n^(-s), s > 1, k0 >= 1.
double zeta_tail(double s, long k0);

/// Gamma function for x > 0.
double gamma_fn(double x);

/// K_H: 1 for H >= 1/2, -(H-1/2) zeta(3/2-H) for H < 1/2.
/// H within 1e-6 of 1/2 routes to the H >= 1/2 branch.
double coefficient_K(const HurstIndex& H);

/// c_H = sqrt(Gamma(2H+1) sin(pi H)) / Gamma(H+1/2).
double scaling_constant_c(const HurstIndex& H);

FbmConstants make_constants(const HurstIndex& H);

}  // namespace fbmwalk
