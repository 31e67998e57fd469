#pragma once

#include "zetatrace/exact.hpp"
#include "zetatrace/finite_field.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>

namespace zetatrace {

/// Short Weierstrass curve y^2 = x^3 + a4 x + a6 over F_q with p > 3 and
/// nonzero discriminant -16 (4 a4^3 + 27 a6^2).
struct CurveSpec {
    FiniteField field;
    FieldElement a4;
    FieldElement a6;
};

/// Validates characteristic and discriminant; throws std::invalid_argument.
CurveSpec make_curve(FiniteField field, FieldElement a4, FieldElement a6);

/// Parses the textual form "p=5 f=1 a4=1 a6=1". Optional key mod=c0,c1,...
/// supplies the field modulus; a4/a6 are integer encodings of elements.
CurveSpec parse_curve_spec(const std::string& text);

/// #E(F_q): exhaustive x sweep scoring 1 + chi(x^3 + a4 x + a6) solutions
/// per abscissa, plus the point at infinity.
int64_t count_points(const CurveSpec& curve);

/// Numerator data of the zeta function. The Frobenius eigenvalue
/// xi = (a + i sqrt(4q - a^2)) / 2 is kept exact through the integer pair
/// (trace_a, trace_a^2 - 4q); choosing the Im xi >= 0 branch is an internal
/// normalization, and both conjugate eigenvalues/zeros are always emitted.
struct ZetaData {
    int64_t q = 0;
    int64_t p = 0;
    int64_t trace_a = 0;
    int genus = 1;
    bool supersingular = false;  // p divides trace_a

    std::complex<double> xi() const;
    /// Both Frobenius eigenvalues, Im >= 0 first.
    std::array<std::complex<double>, 2> eigenvalues() const;
    /// Zeros of zeta in the critical strip: rho_j = 1/2 + i arg(xi_j) / log q.
    std::array<std::complex<double>, 2> zeros() const;
    /// |xi|^2 from the stored integer pair; identically q.
    Rational xi_norm_squared_exact() const;
    /// trace_a^2 - 4q <= 0.
    int64_t discriminant() const { return trace_a * trace_a - 4 * q; }
};

/// Counts points and derives (a, xi, zeros); verifies the Hasse bound.
ZetaData zeta_data(const CurveSpec& curve);

/// ZetaData from already-known invariants, Hasse-checked.
ZetaData zeta_data_from_trace(int64_t q, int64_t p, int64_t trace_a);

/// zeta(s) = (1 - xi q^-s)(1 - conj(xi) q^-s) / ((1 - q^-s)(1 - q^{1-s})).
/// Throws std::domain_error when |denominator| < 1e-12 (at or next to the
/// poles s = 0 and s = 1 modulo the vertical period).
std::complex<double> zeta_eval(const ZetaData& zd, std::complex<double> s);

/// |zeta(s) - zeta(1-s)| / max(1, |zeta(s)|).
double functional_equation_residual(const ZetaData& zd, std::complex<double> s);

/// {"q":..,"a":..,"xi_re":..,"xi_im":..,"zeros":[{"re":..,"im":..},...]}
std::string zeta_json(const ZetaData& zd);

}  // namespace zetatrace
