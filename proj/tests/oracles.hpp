#pragma once

#include "zetatrace/curve.hpp"
#include "zetatrace/exact.hpp"
#include "zetatrace/test_function.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace zetatrace::oracle {

// Independent reference computations used to pin expected values. Each one
// deliberately avoids the code path of the library function it checks:
// counting enumerates raw pairs instead of quadratic characters, the lattice
// sum replaces quadrature plus vertical truncation, Simpson replaces
// Gauss-Legendre, and the exterior-power trace is expanded from literal
// minors.

/// #E(F_q) by enumerating every (x, y) pair and testing y^2 = x^3 + a4 x + a6.
int64_t brute_force_point_count(const CurveSpec& curve);

/// Same curve equation with prime-field coefficients a4, a6 counted over
/// F_{p^n} (coefficients embed as constants).
int64_t brute_force_extension_count(int64_t p, int64_t a4, int64_t a6, int n);

/// Closed points of degree d by direct orbit counting: enumerate the points
/// of E(F_{q^d}) as (x, y) coordinate pairs over F_{p^(f d)}, group them by
/// the Frobenius x -> x^q orbit, and count the orbits of exact size d
/// (including the rational point at infinity as a size-1 orbit for d = 1).
/// Only for prime-field curves.
BigInt brute_force_closed_points(int64_t p, int64_t a4, int64_t a6, int d);

/// log q * sum_{k in Z} e^{rho k log q} alpha(k log q), the exact value the
/// vertical sum over Phi(rho + 2 pi i nu / log q) converges to.
std::complex<double> poisson_spectral_value(const TestFunction& alpha, std::complex<double> rho,
                                            int64_t q);

/// integral e^{s t} alpha(t) dt by composite Simpson on uniform nodes.
std::complex<double> simpson_integral_exp(const TestFunction& alpha, std::complex<double> s,
                                          int intervals);

/// sum_j (-1)^j tr(Lambda^j M^T) for 2x2 M, expanded from literal minors.
double exterior_alternating_trace(const std::array<std::array<double, 2>, 2>& m);

/// Moebius mu by trial factorization.
int mobius_reference(int n);

}  // namespace zetatrace::oracle
