#pragma once

#include "zetatrace/exact.hpp"

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zetatrace {

/// Character of (Z/p^n)^m in digit form. Coordinate j pairs through the
/// fraction sum_{l >= 1} a_{l,j} p^{-l} with digits a_{l,j} in [0, p); the
/// integer digit a_{0,j} never affects the pairing and is normalized to 0.
/// n_j, the largest l with a nonzero digit, is the conductor exponent.
class PCharacter {
public:
    /// digits[j] = {a_0, a_1, ..., a_{n_j}} with a_{n_j} != 0 unless the list
    /// is {0} (trivial coordinate). Throws std::invalid_argument on bad digits.
    PCharacter(int64_t p, int n, std::vector<std::vector<int>> digits);

    /// Character with fractional part r_j / p^n per coordinate (digits are
    /// the base-p expansion of r_j, trailing zeros stripped).
    static PCharacter from_residues(int64_t p, int n, const std::vector<int64_t>& residues);

    int64_t p() const { return p_; }
    int n() const { return n_; }
    int m() const { return static_cast<int>(digits_.size()); }
    const std::vector<std::vector<int>>& digits() const { return digits_; }

    /// n_j: 0 for a trivial coordinate.
    int conductor_exponent(int j) const;
    /// r_j with r_j / p^n = sum_l a_{l,j} p^{-l} (mod 1).
    std::vector<int64_t> residues() const;
    bool trivial() const;

    /// <chi, theta> = exp(2 pi i sum_j r_j theta_j / p^n).
    std::complex<double> pair(const std::vector<int64_t>& theta) const;

private:
    int64_t p_ = 2;
    int n_ = 1;
    std::vector<std::vector<int>> digits_;
};

/// Conductor reads |chi| = max_j p^{n_j}; TopDigit reads the p-adic size of
/// the leading digits, which is 1 for every nonzero character. Conductor is
/// the operative default; TopDigit is kept selectable for comparison runs.
enum class CharNormConvention { Conductor, TopDigit };

/// |chi|: 0 for the trivial character under either convention.
int64_t char_norm(const PCharacter& chi,
                  CharNormConvention convention = CharNormConvention::Conductor);

/// Dense table u : (Z/p^n)^m -> C, flat index sum_j theta_j (p^n)^j.
/// Tables are capped at p^{nm} <= 2^20 entries.
struct TransversalFunction {
    int64_t p = 2;
    int n = 1;
    int m = 1;
    std::vector<std::complex<double>> values;

    int64_t pn() const;
    int64_t size() const { return static_cast<int64_t>(values.size()); }
    int64_t index_of(const std::vector<int64_t>& theta) const;
    std::vector<int64_t> theta_of(int64_t index) const;
    std::complex<double>& at(const std::vector<int64_t>& theta);
    const std::complex<double>& at(const std::vector<int64_t>& theta) const;
};

/// Zero-initialized table; throws std::invalid_argument past the size cap.
TransversalFunction make_transversal_function(int64_t p, int n, int m);

/// All p^{nm} characters, indexed like the flat table order of their residues.
std::vector<PCharacter> enumerate_characters(int64_t p, int n, int m);

/// Analysis coefficients u_hat(chi) = p^{-nm} sum_theta u(theta) <chi, theta>,
/// the conjugate of the synthesis kernel <chi, -theta>, so that
/// inverse_fourier(fourier(u)) = u, the constant 1 has u_hat = indicator of
/// the trivial character, and Plancherel holds with the normalized count
/// measure on theta.
std::vector<std::complex<double>> fourier(const TransversalFunction& u);

/// u(theta) = sum_chi coeffs(chi) <chi, -theta>.
TransversalFunction inverse_fourier(int64_t p, int n, int m,
                                    const std::vector<std::complex<double>>& coeffs);

/// Transversal Laplacian: Fourier multiplier |chi|^2.
TransversalFunction delta_p(const TransversalFunction& u,
                            CharNormConvention convention = CharNormConvention::Conductor);

/// sqrt(sum_chi (1 + |chi|^2)^k |u_hat(chi)|^2).
double sobolev_norm(const TransversalFunction& u, int k,
                    CharNormConvention convention = CharNormConvention::Conductor);

/// Affine map theta -> M theta + b on (Z/p^n)^m. Entries are exact integer
/// lifts so determinant valuations stay computable.
struct PAdicAffineMap {
    int64_t p = 2;
    int n = 1;
    int m = 1;
    std::vector<std::vector<int64_t>> linear;
    std::vector<int64_t> shift;

    BigInt det() const;
    /// True when det is nonzero mod p, i.e. the linear part lies in GL_m(Z_p).
    bool unit() const;
    std::vector<int64_t> apply(const std::vector<int64_t>& theta) const;
};

PAdicAffineMap make_affine_map(int64_t p, int n, std::vector<std::vector<int64_t>> linear,
                               std::vector<int64_t> shift);

/// u composed with g. Throws std::invalid_argument when the linear part is
/// not invertible mod p (the substitution would not preserve Haar measure).
TransversalFunction conjugate_by_affine(const PAdicAffineMap& g, const TransversalFunction& u);

/// Transpose action on characters: residues r -> M^T r (mod p^n). Preserves
/// |chi| for unit maps.
PCharacter transpose_character(const PAdicAffineMap& g, const PCharacter& chi);

/// Image measure could not be resolved as a union of precision-n cells.
struct PrecisionInsufficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HaarScalingReport {
    Rational ratio;  // mu(g(A)) / mu(A)
    int64_t domain_cells = 0;
    int64_t image_cells = 0;
    int valuation = 0;  // v_p(det)
};

/// mu(g(A)) / mu(A) for A a union of precision-n cells, by exact counting:
/// every image cell must be hit by exactly p^{v_p(det)} domain cells, else
/// g(A) is not a cell union at this precision and
/// PrecisionInsufficientError is thrown.
HaarScalingReport haar_scaling_check(const PAdicAffineMap& g,
                                     const std::vector<std::vector<int64_t>>& cells);

struct JacobianReport {
    Rational jac_linear;    // |det M|_p, 0 when det M = 0
    Rational jac_id_minus;  // |det(I - M)|_p, 0 when singular
    bool id_minus_unit = false;  // expected true in the transversal model
};

/// p-adic Jacobians of theta -> M theta and theta -> theta - M theta. A
/// non-unit id-minus Jacobian is reported, not thrown: it means the input
/// matrix leaves the model's assumptions, not that the library is broken.
JacobianReport jacobian_identities(const PAdicAffineMap& g);

/// Multiplier (1 + |chi|^2 + lambda)^{-1} applied above the conductor cutoff
/// and identity at or below it. Composing with (1 + Delta_p + lambda) then
/// differs from the identity only on the finitely many characters with
/// |chi| <= cutoff (the finite-rank defect).
TransversalFunction apply_truncated_resolvent(const TransversalFunction& u, double lambda,
                                              int64_t conductor_cutoff,
                                              CharNormConvention convention =
                                                  CharNormConvention::Conductor);

/// Per-character multiplier of P (1 + Delta_p + lambda) - Id for the
/// truncated resolvent P above.
std::vector<double> parametrix_defect_multiplier(int64_t p, int n, int m, double lambda,
                                                 int64_t conductor_cutoff,
                                                 CharNormConvention convention =
                                                     CharNormConvention::Conductor);

/// Pullback along (Z/p^{n+1})^m -> (Z/p^n)^m: u'(theta) = u(theta mod p^n).
TransversalFunction refine(const TransversalFunction& u);

}  // namespace zetatrace
