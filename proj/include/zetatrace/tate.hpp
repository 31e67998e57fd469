#pragma once

#include "zetatrace/exact.hpp"
#include "zetatrace/flow.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zetatrace {

/// Integer 2x2 matrix, row-major [[a, b], [c, d]], acting on coordinate
/// column vectors.
struct Mat2 {
    int64_t a = 0, b = 0, c = 0, d = 0;

    int64_t det() const { return a * d - b * c; }
    int64_t trace() const { return a + d; }
    static Mat2 identity() { return {1, 0, 0, 1}; }
    Mat2 mul(const Mat2& o) const;
    std::array<int64_t, 2> apply(const std::array<int64_t, 2>& v) const;
};

/// Coordinates of a lattice element in the (omega1, omega2) basis.
using LatticePoint = std::array<int64_t, 2>;

/// Planar lattice Z omega1 + Z omega2 with complex multiplication by xi
/// realized on coordinates by an integer matrix X: the coefficient vector of
/// xi (g1 omega1 + g2 omega2) is X (g1, g2)^T. det X = q >= 2 and
/// trace^2 <= 4 q, so xi xibar = q with |xi| = sqrt(q).
struct LatticeData {
    std::complex<double> omega1;
    std::complex<double> omega2;
    Mat2 xi_matrix;

    int64_t q() const { return xi_matrix.det(); }
    int64_t trace() const { return xi_matrix.trace(); }
    /// Eigenvalue (trace + i sqrt(4q - trace^2)) / 2, Im >= 0 branch.
    std::complex<double> xi_complex() const;
    /// g1 omega1 + g2 omega2.
    std::complex<double> embed(const LatticePoint& g) const;
};

/// Validates determinant, trace bound, R-independence of the periods, and
/// that multiplication by xi_complex agrees with the matrix action on the
/// periods to 1e-9 relative; throws std::invalid_argument.
LatticeData make_lattice(std::complex<double> omega1, std::complex<double> omega2, Mat2 xi);

/// Z[i] with xi = 1 + i, q = 2.
LatticeData gaussian_integer_lattice();
/// Z[sqrt(-3)] with xi = sqrt(-3), q = 3.
LatticeData eisenstein_root_lattice();
/// Z[xi] with xi^2 = xi - 5, q = 5.
LatticeData generic_cm_lattice();

/// {"omega1":[re,im],"omega2":[re,im],"xi_matrix":[[a,b],[c,d]]}
std::string lattice_json(const LatticeData& ld);
LatticeData parse_lattice_json(const std::string& text);

/// Canonical digit set F for Gamma / xi Gamma: exactly q representatives
/// with 0 first, drawn from the half-open coordinate box of a Hermite basis
/// of xi Gamma and enumerated in box order, so F is deterministic given the
/// matrix X. Pairwise non-congruence mod xi Gamma is verified before
/// returning.
std::vector<LatticePoint> digit_set(const LatticeData& ld);

/// [Gamma : xi^nu Gamma] = |det(X^nu)|, exact.
BigInt quotient_count(const LatticeData& ld, int nu);

/// A carry or shift escaped the fixed digit window.
struct DepthExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// xi-adic digit window a_0 ... a_{depth-1} with a_l in the digit set,
/// modeling Gamma / xi^depth Gamma.
struct TateDigits {
    int depth = 0;
    std::vector<LatticePoint> digits;
};

/// Digit expansion of a lattice element: gamma = sum_l a_l xi^l mod
/// xi^depth Gamma, by repeated reduce-subtract-divide.
TateDigits expand_element(const LatticeData& ld, const LatticePoint& gamma, int depth);

/// Canonical coordinate representative of the digits' value mod xi^depth.
LatticePoint digits_value(const LatticeData& ld, const TateDigits& t);

/// Multiplication by xi: shifts every level up by one and renormalizes into
/// the digit window. Throws DepthExhaustedError when the top digit is
/// nonzero, since its carry would escape the window.
TateDigits xi_multiply(const LatticeData& ld, const TateDigits& t);

struct BijectivityReport {
    bool bijective = false;
    BigInt quotient_size;
};

/// Exhaustively checks x -> x - xi x on Gamma / xi^nu Gamma.
BijectivityReport one_minus_xi_bijectivity(const LatticeData& ld, int nu);

struct DualBasis {
    std::complex<double> omega1_star;
    std::complex<double> omega2_star;
};

/// Gamma^* = {z : Re z Re gamma + Im z Im gamma in 2 pi Z for all gamma},
/// returned through the basis with (omega_i^*; omega_j) = 2 pi delta_ij.
DualBasis dual_lattice(const LatticeData& ld);

/// The pairing (z; w) = Re z Re w + Im z Im w.
double lattice_pairing(std::complex<double> z, std::complex<double> w);

/// [(xi^nu Gamma)^* : Gamma^*] via the exact transfer determinant; equals
/// [Gamma : xi^nu Gamma].
BigInt dual_index(const LatticeData& ld, int nu);

struct FixedPointReport {
    std::complex<double> z0;
    double residual;        // |xi^{-k} z0 - z0 - gamma|
    double leaf_jacobian;   // |xi^{-k} - 1|^2
};

/// z0 = gamma / (xi^{-k} - 1) for k != 0, with its defining residual.
FixedPointReport solve_fixed_point(const LatticeData& ld, const LatticePoint& gamma, int k);

/// Number of solutions mod Gamma at transversal depth k: |det(I - X^k)|,
/// exact; equals the period-k point count sum_{d | k} d B_d of the matching
/// curve census.
BigInt fixed_point_count(const LatticeData& ld, int k);

struct OrbitWeightReport {
    int degree = 0;              // d: the orbit has length d log q
    int k = 0;                   // traversal count, k >= 1
    FlowDirection direction = FlowDirection::Plus;
    Rational transversal_factor; // q^{-k d} for minus, 1 for plus
    int leaf_sign = 1;           // sign of det(I - return differential)
    double length = 0.0;         // d log q
    double delta_position = 0.0; // +- k d log q
    double coefficient = 0.0;    // length * leaf_sign * transversal_factor
};

/// Assembles the distributional-trace coefficient carried by the k-th
/// traversal of a degree-d orbit in the given direction.
OrbitWeightReport orbit_weight_report(const LatticeData& ld, int degree, int k,
                                      FlowDirection direction);

}  // namespace zetatrace
