#include "zetatrace/padic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

namespace zetatrace {

namespace {

constexpr int64_t kTableCap = 1 << 20;

int64_t pow_int(int64_t base, int e) {
    int64_t result = 1;
    for (int i = 0; i < e; ++i) result *= base;
    return result;
}

bool is_prime_small(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

void check_pn(int64_t p, int n) {
    if (!is_prime_small(p)) throw std::invalid_argument("p must be prime");
    if (n < 1 || n > 20) throw std::invalid_argument("precision n must be in [1, 20]");
    double size = 1.0;
    for (int i = 0; i < n; ++i) size *= static_cast<double>(p);
    if (size > static_cast<double>(kTableCap)) {
        throw std::invalid_argument("p^n exceeds the table cap 2^20");
    }
}

int64_t mod_pos(int64_t value, int64_t modulus) {
    const int64_t r = value % modulus;
    return r < 0 ? r + modulus : r;
}

/// Largest l <= n with a nonzero base-p digit of r in position n - l, i.e.
/// n - v_p(r); 0 for r = 0.
int conductor_from_residue(int64_t p, int n, int64_t r) {
    if (r == 0) return 0;
    int v = 0;
    while (r % p == 0) {
        r /= p;
        ++v;
    }
    return n - v;
}

int64_t norm_from_residues(int64_t p, int n, const std::vector<int64_t>& residues,
                           CharNormConvention convention) {
    int max_exp = 0;
    bool nonzero = false;
    for (const int64_t r : residues) {
        if (r != 0) {
            nonzero = true;
            max_exp = std::max(max_exp, conductor_from_residue(p, n, r));
        }
    }
    if (!nonzero) return 0;
    if (convention == CharNormConvention::TopDigit) return 1;
    return pow_int(p, max_exp);
}

/// exp(2 pi i k / pn) from an exact residue k.
std::complex<double> root_of_unity(int64_t k, int64_t pn) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(pn);
    return std::polar(1.0, angle);
}

std::vector<std::complex<double>> root_table(int64_t pn) {
    std::vector<std::complex<double>> table;
    table.reserve(static_cast<size_t>(pn));
    for (int64_t k = 0; k < pn; ++k) table.push_back(root_of_unity(k, pn));
    return table;
}

BigInt det_recursive(const std::vector<std::vector<int64_t>>& a, std::vector<int>& cols,
                     int row) {
    const int m = static_cast<int>(a.size());
    if (row == m) return 1;
    BigInt result = 0;
    int sign = 1;
    for (size_t ci = 0; ci < cols.size(); ++ci) {
        const int col = cols[ci];
        if (a[static_cast<size_t>(row)][static_cast<size_t>(col)] != 0) {
            std::vector<int> rest;
            rest.reserve(cols.size() - 1);
            for (size_t cj = 0; cj < cols.size(); ++cj) {
                if (cj != ci) rest.push_back(cols[cj]);
            }
            const BigInt minor = det_recursive(a, rest, row + 1);
            result += BigInt(sign) * a[static_cast<size_t>(row)][static_cast<size_t>(col)] *
                      minor;
        }
        sign = -sign;
    }
    return result;
}

BigInt matrix_det(const std::vector<std::vector<int64_t>>& a) {
    std::vector<int> cols;
    for (int j = 0; j < static_cast<int>(a.size()); ++j) cols.push_back(j);
    return det_recursive(a, cols, 0);
}

}  // namespace

PCharacter::PCharacter(int64_t p, int n, std::vector<std::vector<int>> digits)
    : p_(p), n_(n), digits_(std::move(digits)) {
    check_pn(p_, n_);
    if (digits_.empty()) throw std::invalid_argument("character needs at least one coordinate");
    for (auto& coord : digits_) {
        if (coord.empty() || static_cast<int>(coord.size()) > n_ + 1) {
            throw std::invalid_argument("character digit list must have 1 to n+1 entries");
        }
        for (const int a : coord) {
            if (a < 0 || a >= p_) throw std::invalid_argument("character digit out of [0, p)");
        }
        if (coord.size() > 1 && coord.back() == 0) {
            throw std::invalid_argument("character digit list has a trailing zero");
        }
        coord[0] = 0;
    }
}

PCharacter PCharacter::from_residues(int64_t p, int n, const std::vector<int64_t>& residues) {
    check_pn(p, n);
    const int64_t pn = pow_int(p, n);
    std::vector<std::vector<int>> digits;
    digits.reserve(residues.size());
    for (int64_t r : residues) {
        r = mod_pos(r, pn);
        // r / p^n = sum_{l=1}^{n} a_l p^{-l} with a_l the base-p digit of r in
        // position n - l.
        std::vector<int> coord{0};
        std::vector<int> base_digits(static_cast<size_t>(n), 0);
        int64_t rest = r;
        for (int i = 0; i < n; ++i) {
            base_digits[static_cast<size_t>(i)] = static_cast<int>(rest % p);
            rest /= p;
        }
        int top = 0;
        for (int l = 1; l <= n; ++l) {
            if (base_digits[static_cast<size_t>(n - l)] != 0) top = l;
        }
        for (int l = 1; l <= top; ++l) coord.push_back(base_digits[static_cast<size_t>(n - l)]);
        digits.push_back(std::move(coord));
    }
    return PCharacter(p, n, std::move(digits));
}

int PCharacter::conductor_exponent(int j) const {
    return static_cast<int>(digits_[static_cast<size_t>(j)].size()) - 1;
}

std::vector<int64_t> PCharacter::residues() const {
    std::vector<int64_t> result;
    result.reserve(digits_.size());
    for (const auto& coord : digits_) {
        int64_t r = 0;
        for (size_t l = 1; l < coord.size(); ++l) {
            r += coord[l] * pow_int(p_, n_ - static_cast<int>(l));
        }
        result.push_back(r);
    }
    return result;
}

bool PCharacter::trivial() const {
    for (const auto& coord : digits_) {
        if (coord.size() > 1) return false;
    }
    return true;
}

std::complex<double> PCharacter::pair(const std::vector<int64_t>& theta) const {
    if (theta.size() != digits_.size()) {
        throw std::invalid_argument("pairing needs matching coordinate counts");
    }
    const int64_t pn = pow_int(p_, n_);
    const std::vector<int64_t> res = residues();
    int64_t acc = 0;
    for (size_t j = 0; j < res.size(); ++j) {
        acc = mod_pos(acc + res[j] * mod_pos(theta[j], pn), pn);
    }
    return root_of_unity(acc, pn);
}

int64_t char_norm(const PCharacter& chi, CharNormConvention convention) {
    return norm_from_residues(chi.p(), chi.n(), chi.residues(), convention);
}

int64_t TransversalFunction::pn() const { return pow_int(p, n); }

int64_t TransversalFunction::index_of(const std::vector<int64_t>& theta) const {
    if (static_cast<int>(theta.size()) != m) {
        throw std::invalid_argument("point has the wrong number of coordinates");
    }
    const int64_t base = pn();
    int64_t index = 0;
    for (int j = m - 1; j >= 0; --j) {
        index = index * base + mod_pos(theta[static_cast<size_t>(j)], base);
    }
    return index;
}

std::vector<int64_t> TransversalFunction::theta_of(int64_t index) const {
    const int64_t base = pn();
    std::vector<int64_t> theta(static_cast<size_t>(m), 0);
    for (int j = 0; j < m; ++j) {
        theta[static_cast<size_t>(j)] = index % base;
        index /= base;
    }
    return theta;
}

std::complex<double>& TransversalFunction::at(const std::vector<int64_t>& theta) {
    return values[static_cast<size_t>(index_of(theta))];
}

const std::complex<double>& TransversalFunction::at(const std::vector<int64_t>& theta) const {
    return values[static_cast<size_t>(index_of(theta))];
}

TransversalFunction make_transversal_function(int64_t p, int n, int m) {
    check_pn(p, n);
    if (m < 1 || m > 8) throw std::invalid_argument("coordinate count m must be in [1, 8]");
    double size = 1.0;
    for (int i = 0; i < n * m; ++i) size *= static_cast<double>(p);
    if (size > static_cast<double>(kTableCap)) {
        throw std::invalid_argument("p^{nm} exceeds the table cap 2^20");
    }
    TransversalFunction u;
    u.p = p;
    u.n = n;
    u.m = m;
    u.values.assign(static_cast<size_t>(size), {0.0, 0.0});
    return u;
}

std::vector<PCharacter> enumerate_characters(int64_t p, int n, int m) {
    const TransversalFunction shape = make_transversal_function(p, n, m);
    std::vector<PCharacter> chars;
    chars.reserve(static_cast<size_t>(shape.size()));
    for (int64_t index = 0; index < shape.size(); ++index) {
        chars.push_back(PCharacter::from_residues(p, n, shape.theta_of(index)));
    }
    return chars;
}

std::vector<std::complex<double>> fourier(const TransversalFunction& u) {
    const int64_t size = u.size();
    const int64_t pn = u.pn();
    const auto roots = root_table(pn);
    std::vector<std::complex<double>> coeffs(static_cast<size_t>(size), {0.0, 0.0});
    const double norm = 1.0 / static_cast<double>(size);
    for (int64_t ci = 0; ci < size; ++ci) {
        const std::vector<int64_t> r = u.theta_of(ci);
        std::complex<double> acc{0.0, 0.0};
        for (int64_t ti = 0; ti < size; ++ti) {
            const std::vector<int64_t> theta = u.theta_of(ti);
            int64_t dot = 0;
            for (int j = 0; j < u.m; ++j) {
                dot = mod_pos(dot + r[static_cast<size_t>(j)] * theta[static_cast<size_t>(j)],
                              pn);
            }
            acc += u.values[static_cast<size_t>(ti)] * roots[static_cast<size_t>(dot)];
        }
        coeffs[static_cast<size_t>(ci)] = acc * norm;
    }
    return coeffs;
}

TransversalFunction inverse_fourier(int64_t p, int n, int m,
                                    const std::vector<std::complex<double>>& coeffs) {
    TransversalFunction u = make_transversal_function(p, n, m);
    if (static_cast<int64_t>(coeffs.size()) != u.size()) {
        throw std::invalid_argument("coefficient table has the wrong size");
    }
    const int64_t size = u.size();
    const int64_t pn = u.pn();
    const auto roots = root_table(pn);
    for (int64_t ti = 0; ti < size; ++ti) {
        const std::vector<int64_t> theta = u.theta_of(ti);
        std::complex<double> acc{0.0, 0.0};
        for (int64_t ci = 0; ci < size; ++ci) {
            const std::vector<int64_t> r = u.theta_of(ci);
            int64_t dot = 0;
            for (int j = 0; j < m; ++j) {
                dot = mod_pos(dot + r[static_cast<size_t>(j)] * theta[static_cast<size_t>(j)],
                              pn);
            }
            // <chi, -theta> = conj(<chi, theta>)
            acc += coeffs[static_cast<size_t>(ci)] * std::conj(roots[static_cast<size_t>(dot)]);
        }
        u.values[static_cast<size_t>(ti)] = acc;
    }
    return u;
}

TransversalFunction delta_p(const TransversalFunction& u, CharNormConvention convention) {
    std::vector<std::complex<double>> coeffs = fourier(u);
    for (int64_t ci = 0; ci < u.size(); ++ci) {
        const int64_t norm = norm_from_residues(u.p, u.n, u.theta_of(ci), convention);
        coeffs[static_cast<size_t>(ci)] *= static_cast<double>(norm) * static_cast<double>(norm);
    }
    return inverse_fourier(u.p, u.n, u.m, coeffs);
}

double sobolev_norm(const TransversalFunction& u, int k, CharNormConvention convention) {
    if (k < 0) throw std::invalid_argument("Sobolev order k must be >= 0");
    const std::vector<std::complex<double>> coeffs = fourier(u);
    std::vector<double> terms;
    terms.reserve(coeffs.size());
    for (int64_t ci = 0; ci < u.size(); ++ci) {
        const int64_t norm = norm_from_residues(u.p, u.n, u.theta_of(ci), convention);
        const double weight =
            std::pow(1.0 + static_cast<double>(norm) * static_cast<double>(norm), k);
        terms.push_back(weight * std::norm(coeffs[static_cast<size_t>(ci)]));
    }
    double acc = 0.0;
    for (const double t : terms) acc += t;
    return std::sqrt(acc);
}

BigInt PAdicAffineMap::det() const { return matrix_det(linear); }

bool PAdicAffineMap::unit() const { return det() % p != 0; }

std::vector<int64_t> PAdicAffineMap::apply(const std::vector<int64_t>& theta) const {
    if (static_cast<int>(theta.size()) != m) {
        throw std::invalid_argument("point has the wrong number of coordinates");
    }
    const int64_t pn = pow_int(p, n);
    std::vector<int64_t> out(static_cast<size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
        int64_t acc = mod_pos(shift[static_cast<size_t>(i)], pn);
        for (int j = 0; j < m; ++j) {
            const int64_t entry = mod_pos(linear[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                          pn);
            acc = mod_pos(acc + entry * mod_pos(theta[static_cast<size_t>(j)], pn), pn);
        }
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

PAdicAffineMap make_affine_map(int64_t p, int n, std::vector<std::vector<int64_t>> linear,
                               std::vector<int64_t> shift) {
    check_pn(p, n);
    const int m = static_cast<int>(linear.size());
    if (m < 1 || m > 8) throw std::invalid_argument("affine map needs 1 to 8 coordinates");
    for (const auto& row : linear) {
        if (static_cast<int>(row.size()) != m) {
            throw std::invalid_argument("affine map linear part must be square");
        }
    }
    if (static_cast<int>(shift.size()) != m) {
        throw std::invalid_argument("affine map shift has the wrong size");
    }
    PAdicAffineMap g;
    g.p = p;
    g.n = n;
    g.m = m;
    g.linear = std::move(linear);
    g.shift = std::move(shift);
    return g;
}

TransversalFunction conjugate_by_affine(const PAdicAffineMap& g, const TransversalFunction& u) {
    if (g.p != u.p || g.n != u.n || g.m != u.m) {
        throw std::invalid_argument("affine map and table live on different spaces");
    }
    if (!g.unit()) {
        throw std::invalid_argument("substitution needs a linear part invertible mod p");
    }
    TransversalFunction out = make_transversal_function(u.p, u.n, u.m);
    for (int64_t ti = 0; ti < u.size(); ++ti) {
        const std::vector<int64_t> image = g.apply(u.theta_of(ti));
        out.values[static_cast<size_t>(ti)] = u.values[static_cast<size_t>(u.index_of(image))];
    }
    return out;
}

PCharacter transpose_character(const PAdicAffineMap& g, const PCharacter& chi) {
    if (g.p != chi.p() || g.n != chi.n() || g.m != chi.m()) {
        throw std::invalid_argument("affine map and character live on different spaces");
    }
    const int64_t pn = pow_int(g.p, g.n);
    const std::vector<int64_t> r = chi.residues();
    std::vector<int64_t> out(static_cast<size_t>(g.m), 0);
    for (int j = 0; j < g.m; ++j) {
        int64_t acc = 0;
        for (int i = 0; i < g.m; ++i) {
            const int64_t entry = mod_pos(g.linear[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                          pn);
            acc = mod_pos(acc + entry * r[static_cast<size_t>(i)], pn);
        }
        out[static_cast<size_t>(j)] = acc;
    }
    return PCharacter::from_residues(g.p, g.n, out);
}

HaarScalingReport haar_scaling_check(const PAdicAffineMap& g,
                                     const std::vector<std::vector<int64_t>>& cells) {
    if (cells.empty()) throw std::invalid_argument("Haar check needs at least one cell");
    const BigInt det = g.det();
    if (det == 0) {
        throw std::invalid_argument("Haar check needs a nonsingular linear part");
    }
    const int v = static_cast<int>(padic_valuation(det, g.p));
    const TransversalFunction shape = make_transversal_function(g.p, g.n, g.m);
    std::unordered_set<int64_t> domain;
    for (const auto& cell : cells) domain.insert(shape.index_of(cell));
    const BigInt expected = bigint_pow(BigInt(g.p), static_cast<unsigned>(v));
    if (expected > BigInt(static_cast<int64_t>(domain.size()))) {
        throw PrecisionInsufficientError(
            "image cells need p^" + std::to_string(v) +
            " preimage cells each, more than the domain holds at precision n=" +
            std::to_string(g.n));
    }
    std::unordered_map<int64_t, int64_t> hits;
    for (const int64_t index : domain) {
        const std::vector<int64_t> image = g.apply(shape.theta_of(index));
        ++hits[shape.index_of(image)];
    }
    for (const auto& [image_index, count] : hits) {
        if (BigInt(count) != expected) {
            throw PrecisionInsufficientError(
                "image cell " + std::to_string(image_index) + " is hit " +
                std::to_string(count) + " times, expected p^" + std::to_string(v) +
                "; the image is not a union of precision-n cells");
        }
    }
    HaarScalingReport report;
    report.domain_cells = static_cast<int64_t>(domain.size());
    report.image_cells = static_cast<int64_t>(hits.size());
    report.valuation = v;
    report.ratio = Rational(report.image_cells, report.domain_cells);
    return report;
}

JacobianReport jacobian_identities(const PAdicAffineMap& g) {
    JacobianReport report;
    const BigInt det_m = g.det();
    if (det_m == 0) {
        report.jac_linear = Rational(0);
    } else {
        const int v = static_cast<int>(padic_valuation(det_m, g.p));
        report.jac_linear = Rational(1, bigint_pow(BigInt(g.p), static_cast<unsigned>(v)));
    }
    std::vector<std::vector<int64_t>> id_minus = g.linear;
    for (int i = 0; i < g.m; ++i) {
        for (int j = 0; j < g.m; ++j) {
            id_minus[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                (i == j ? 1 : 0) - g.linear[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    const BigInt det_im = matrix_det(id_minus);
    if (det_im == 0) {
        report.jac_id_minus = Rational(0);
        report.id_minus_unit = false;
    } else {
        const int v = static_cast<int>(padic_valuation(det_im, g.p));
        report.jac_id_minus = Rational(1, bigint_pow(BigInt(g.p), static_cast<unsigned>(v)));
        report.id_minus_unit = (v == 0);
    }
    return report;
}

TransversalFunction apply_truncated_resolvent(const TransversalFunction& u, double lambda,
                                              int64_t conductor_cutoff,
                                              CharNormConvention convention) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("resolvent shift lambda must be >= 0");
    std::vector<std::complex<double>> coeffs = fourier(u);
    for (int64_t ci = 0; ci < u.size(); ++ci) {
        const int64_t norm = norm_from_residues(u.p, u.n, u.theta_of(ci), convention);
        if (norm > conductor_cutoff) {
            const double symbol =
                1.0 + static_cast<double>(norm) * static_cast<double>(norm) + lambda;
            coeffs[static_cast<size_t>(ci)] /= symbol;
        }
    }
    return inverse_fourier(u.p, u.n, u.m, coeffs);
}

std::vector<double> parametrix_defect_multiplier(int64_t p, int n, int m, double lambda,
                                                 int64_t conductor_cutoff,
                                                 CharNormConvention convention) {
    const TransversalFunction shape = make_transversal_function(p, n, m);
    std::vector<double> defect(static_cast<size_t>(shape.size()), 0.0);
    for (int64_t ci = 0; ci < shape.size(); ++ci) {
        const int64_t norm = norm_from_residues(p, n, shape.theta_of(ci), convention);
        if (norm <= conductor_cutoff) {
            // P acts as the identity here, so the defect multiplier is
            // (1 + |chi|^2 + lambda) - 1 in closed form.
            defect[static_cast<size_t>(ci)] =
                static_cast<double>(norm) * static_cast<double>(norm) + lambda;
        }
    }
    return defect;
}

TransversalFunction refine(const TransversalFunction& u) {
    TransversalFunction fine = make_transversal_function(u.p, u.n + 1, u.m);
    const int64_t coarse_pn = u.pn();
    for (int64_t ti = 0; ti < fine.size(); ++ti) {
        std::vector<int64_t> theta = fine.theta_of(ti);
        for (auto& c : theta) c = mod_pos(c, coarse_pn);
        fine.values[static_cast<size_t>(ti)] = u.values[static_cast<size_t>(u.index_of(theta))];
    }
    return fine;
}

}  // namespace zetatrace
