#include "zetatrace/tate.hpp"

#include "zetatrace/errors.hpp"
#include "zetatrace/explicit_formula.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace zetatrace {

namespace {

constexpr int64_t kQuotientCap = 1 << 20;

struct BigMat2 {
    BigInt a, b, c, d;

    BigInt det() const { return a * d - b * c; }
    static BigMat2 identity() { return {1, 0, 0, 1}; }
    static BigMat2 from(const Mat2& m) { return {m.a, m.b, m.c, m.d}; }
    BigMat2 mul(const BigMat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

BigMat2 big_power(const Mat2& m, int e) {
    BigMat2 acc = BigMat2::identity();
    const BigMat2 base = BigMat2::from(m);
    for (int i = 0; i < e; ++i) acc = acc.mul(base);
    return acc;
}

int64_t to_int64_checked(const BigInt& v, const char* what) {
    if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min()) {
        throw std::invalid_argument(std::string(what) + " exceeds the 64-bit range");
    }
    return v.convert_to<int64_t>();
}

Mat2 power_checked(const Mat2& m, int e) {
    const BigMat2 big = big_power(m, e);
    return Mat2{to_int64_checked(big.a, "matrix power entry"),
                to_int64_checked(big.b, "matrix power entry"),
                to_int64_checked(big.c, "matrix power entry"),
                to_int64_checked(big.d, "matrix power entry")};
}

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int64_t mod_pos(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

/// g = gcd(a, b) >= 0 with s a + t b = g.
void extended_gcd(int64_t a, int64_t b, int64_t& g, int64_t& s, int64_t& t) {
    int64_t old_r = a, r = b;
    int64_t old_s = 1, s_cur = 0;
    int64_t old_t = 0, t_cur = 1;
    while (r != 0) {
        const int64_t quot = old_r / r;
        int64_t tmp = old_r - quot * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quot * s_cur;
        old_s = s_cur;
        s_cur = tmp;
        tmp = old_t - quot * t_cur;
        old_t = t_cur;
        t_cur = tmp;
    }
    g = old_r;
    s = old_s;
    t = old_t;
    if (g < 0) {
        g = -g;
        s = -s;
        t = -t;
    }
}

/// Coset bookkeeping for Gamma / M Gamma through a Hermite basis of the
/// column lattice of M: u_b = (h, 0) and u_a = (xa, g) with g the gcd of the
/// generators' second coordinates, h = |det M| / g, and 0 <= xa < h.
/// Representatives are the box 0 <= x < h, 0 <= y < g.
struct CosetBox {
    int64_t g = 1;
    int64_t h = 1;
    int64_t xa = 0;

    explicit CosetBox(const Mat2& m) {
        const int64_t det = m.det();
        if (det == 0) throw std::invalid_argument("coset box needs a nonsingular matrix");
        int64_t s = 0, t = 0;
        extended_gcd(m.c, m.d, g, s, t);
        h = std::llabs(det) / g;
        xa = mod_pos(s * m.a + t * m.b, h);
    }

    int64_t size() const { return g * h; }

    LatticePoint reduce(const LatticePoint& v) const {
        const int64_t k = floor_div(v[1], g);
        const int64_t y = v[1] - k * g;
        const int64_t x = mod_pos(v[0] - k * xa, h);
        return {x, y};
    }

    int64_t index(const LatticePoint& rep) const { return rep[1] * h + rep[0]; }

    LatticePoint rep_at(int64_t index) const { return {index % h, index / h}; }
};

LatticePoint subtract(const LatticePoint& a, const LatticePoint& b) {
    return {a[0] - b[0], a[1] - b[1]};
}

/// Exact solve of M w = v; throws InternalInconsistencyError when v is not
/// in the column lattice of M.
LatticePoint exact_solve(const Mat2& m, const LatticePoint& v) {
    const int64_t det = m.det();
    const int64_t n1 = m.d * v[0] - m.b * v[1];
    const int64_t n2 = -m.c * v[0] + m.a * v[1];
    if (n1 % det != 0 || n2 % det != 0) {
        throw InternalInconsistencyError("lattice element is not divisible by xi as expected");
    }
    return {n1 / det, n2 / det};
}

std::complex<double> complex_power(std::complex<double> base, int e) {
    std::complex<double> acc{1.0, 0.0};
    for (int i = 0; i < std::abs(e); ++i) acc *= base;
    return e >= 0 ? acc : 1.0 / acc;
}

}  // namespace

Mat2 Mat2::mul(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

std::array<int64_t, 2> Mat2::apply(const std::array<int64_t, 2>& v) const {
    return {a * v[0] + b * v[1], c * v[0] + d * v[1]};
}

std::complex<double> LatticeData::xi_complex() const {
    const double tr = static_cast<double>(trace());
    const double disc = 4.0 * static_cast<double>(q()) - tr * tr;
    return {tr / 2.0, std::sqrt(std::max(disc, 0.0)) / 2.0};
}

std::complex<double> LatticeData::embed(const LatticePoint& g) const {
    return static_cast<double>(g[0]) * omega1 + static_cast<double>(g[1]) * omega2;
}

LatticeData make_lattice(std::complex<double> omega1, std::complex<double> omega2, Mat2 xi) {
    const int64_t det = xi.det();
    if (det < 2) throw std::invalid_argument("multiplier matrix needs det >= 2");
    const int64_t tr = xi.trace();
    if (tr * tr > 4 * det) {
        throw std::invalid_argument("multiplier matrix needs trace^2 <= 4 det");
    }
    const double indep = omega1.real() * omega2.imag() - omega1.imag() * omega2.real();
    if (std::abs(indep) <= 1e-12 * (std::abs(omega1) * std::abs(omega2) + 1.0)) {
        throw std::invalid_argument("periods must be R-linearly independent");
    }
    LatticeData ld{omega1, omega2, xi};
    const std::complex<double> xic = ld.xi_complex();
    const std::complex<double> img1 = xic * omega1;
    const std::complex<double> img2 = xic * omega2;
    const std::complex<double> act1 =
        static_cast<double>(xi.a) * omega1 + static_cast<double>(xi.c) * omega2;
    const std::complex<double> act2 =
        static_cast<double>(xi.b) * omega1 + static_cast<double>(xi.d) * omega2;
    const double scale = std::abs(img1) + std::abs(img2) + 1.0;
    if (std::abs(img1 - act1) > 1e-9 * scale || std::abs(img2 - act2) > 1e-9 * scale) {
        throw std::invalid_argument(
            "matrix action on the periods disagrees with multiplication by xi");
    }
    return ld;
}

LatticeData gaussian_integer_lattice() {
    return make_lattice({1.0, 0.0}, {0.0, 1.0}, Mat2{1, -1, 1, 1});
}

LatticeData eisenstein_root_lattice() {
    return make_lattice({1.0, 0.0}, {0.0, std::sqrt(3.0)}, Mat2{0, -3, 1, 0});
}

LatticeData generic_cm_lattice() {
    return make_lattice({1.0, 0.0}, {0.5, std::sqrt(19.0) / 2.0}, Mat2{0, -5, 1, 1});
}

std::string lattice_json(const LatticeData& ld) {
    nlohmann::ordered_json out;
    out["omega1"] = {ld.omega1.real(), ld.omega1.imag()};
    out["omega2"] = {ld.omega2.real(), ld.omega2.imag()};
    out["xi_matrix"] = {{ld.xi_matrix.a, ld.xi_matrix.b}, {ld.xi_matrix.c, ld.xi_matrix.d}};
    return out.dump(2);
}

LatticeData parse_lattice_json(const std::string& text) {
    nlohmann::json in;
    try {
        in = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad lattice JSON: ") + e.what());
    }
    try {
        const std::complex<double> omega1(in.at("omega1").at(0).get<double>(),
                                          in.at("omega1").at(1).get<double>());
        const std::complex<double> omega2(in.at("omega2").at(0).get<double>(),
                                          in.at("omega2").at(1).get<double>());
        const auto& xm = in.at("xi_matrix");
        Mat2 xi{xm.at(0).at(0).get<int64_t>(), xm.at(0).at(1).get<int64_t>(),
                xm.at(1).at(0).get<int64_t>(), xm.at(1).at(1).get<int64_t>()};
        return make_lattice(omega1, omega2, xi);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad lattice JSON: ") + e.what());
    }
}

std::vector<LatticePoint> digit_set(const LatticeData& ld) {
    const CosetBox box(ld.xi_matrix);
    if (box.size() > kQuotientCap) {
        throw std::invalid_argument("digit set exceeds the enumeration cap 2^20");
    }
    std::vector<LatticePoint> digits;
    digits.reserve(static_cast<size_t>(box.size()));
    for (int64_t index = 0; index < box.size(); ++index) {
        digits.push_back(box.rep_at(index));
    }
    for (size_t i = 0; i < digits.size(); ++i) {
        for (size_t j = i + 1; j < digits.size(); ++j) {
            const LatticePoint diff = subtract(digits[i], digits[j]);
            const LatticePoint rep = box.reduce(diff);
            if (rep[0] == 0 && rep[1] == 0) {
                throw InternalInconsistencyError("digit set has congruent representatives");
            }
        }
    }
    return digits;
}

BigInt quotient_count(const LatticeData& ld, int nu) {
    if (nu < 0) throw std::invalid_argument("quotient depth must be >= 0");
    BigInt det = big_power(ld.xi_matrix, nu).det();
    if (det < 0) det = -det;
    return det;
}

TateDigits expand_element(const LatticeData& ld, const LatticePoint& gamma, int depth) {
    if (depth < 1) throw std::invalid_argument("digit expansion needs depth >= 1");
    const CosetBox box(ld.xi_matrix);
    TateDigits out;
    out.depth = depth;
    LatticePoint rest = gamma;
    for (int level = 0; level < depth; ++level) {
        const LatticePoint digit = box.reduce(rest);
        out.digits.push_back(digit);
        rest = exact_solve(ld.xi_matrix, subtract(rest, digit));
    }
    return out;
}

LatticePoint digits_value(const LatticeData& ld, const TateDigits& t) {
    if (t.depth < 1 || static_cast<int>(t.digits.size()) != t.depth) {
        throw std::invalid_argument("digit window is malformed");
    }
    if (quotient_count(ld, t.depth) > kQuotientCap) {
        throw std::invalid_argument("digit window value exceeds the enumeration cap 2^20");
    }
    LatticePoint acc{0, 0};
    Mat2 power = Mat2::identity();
    for (int level = 0; level < t.depth; ++level) {
        const LatticePoint shifted = power.apply(t.digits[static_cast<size_t>(level)]);
        acc[0] += shifted[0];
        acc[1] += shifted[1];
        power = power.mul(ld.xi_matrix);
    }
    const CosetBox box(power_checked(ld.xi_matrix, t.depth));
    return box.reduce(acc);
}

TateDigits xi_multiply(const LatticeData& ld, const TateDigits& t) {
    (void)ld;
    if (t.digits.empty()) throw std::invalid_argument("digit window is empty");
    const LatticePoint top = t.digits.back();
    if (top[0] != 0 || top[1] != 0) {
        throw DepthExhaustedError("xi shift carries past the top of the digit window");
    }
    TateDigits out;
    out.depth = t.depth;
    out.digits.push_back({0, 0});
    for (size_t level = 0; level + 1 < t.digits.size(); ++level) {
        out.digits.push_back(t.digits[level]);
    }
    return out;
}

BijectivityReport one_minus_xi_bijectivity(const LatticeData& ld, int nu) {
    if (nu < 1) throw std::invalid_argument("bijectivity depth must be >= 1");
    const BigInt size_exact = quotient_count(ld, nu);
    if (size_exact > kQuotientCap) {
        throw std::invalid_argument("quotient exceeds the enumeration cap 2^20");
    }
    const Mat2 power = power_checked(ld.xi_matrix, nu);
    const CosetBox box(power);
    BijectivityReport report;
    report.quotient_size = size_exact;
    std::vector<bool> seen(static_cast<size_t>(box.size()), false);
    for (int64_t index = 0; index < box.size(); ++index) {
        const LatticePoint x = box.rep_at(index);
        const LatticePoint xi_x = ld.xi_matrix.apply(x);
        const LatticePoint image = box.reduce(subtract(x, xi_x));
        const int64_t slot = box.index(image);
        if (seen[static_cast<size_t>(slot)]) {
            report.bijective = false;
            return report;
        }
        seen[static_cast<size_t>(slot)] = true;
    }
    report.bijective = true;
    return report;
}

DualBasis dual_lattice(const LatticeData& ld) {
    const double det = ld.omega1.real() * ld.omega2.imag() - ld.omega1.imag() * ld.omega2.real();
    const double two_pi = 2.0 * std::numbers::pi;
    DualBasis dual;
    dual.omega1_star = {two_pi * ld.omega2.imag() / det, -two_pi * ld.omega2.real() / det};
    dual.omega2_star = {-two_pi * ld.omega1.imag() / det, two_pi * ld.omega1.real() / det};
    return dual;
}

double lattice_pairing(std::complex<double> z, std::complex<double> w) {
    return z.real() * w.real() + z.imag() * w.imag();
}

BigInt dual_index(const LatticeData& ld, int nu) {
    if (nu < 0) throw std::invalid_argument("dual index depth must be >= 0");
    // The dual of xi^nu Gamma is spanned by ((X^nu)^T)^{-1} acting on the
    // dual basis, so the index is |det((X^nu)^T)|.
    const Mat2 xt{ld.xi_matrix.a, ld.xi_matrix.c, ld.xi_matrix.b, ld.xi_matrix.d};
    BigInt det = big_power(xt, nu).det();
    if (det < 0) det = -det;
    return det;
}

FixedPointReport solve_fixed_point(const LatticeData& ld, const LatticePoint& gamma, int k) {
    if (k == 0) throw std::invalid_argument("fixed point depth k must be nonzero");
    const std::complex<double> xik_inv = complex_power(ld.xi_complex(), -k);
    const std::complex<double> denom = xik_inv - 1.0;
    const std::complex<double> g = ld.embed(gamma);
    FixedPointReport report;
    report.z0 = g / denom;
    report.residual = std::abs(xik_inv * report.z0 - report.z0 - g);
    report.leaf_jacobian = std::norm(denom);
    return report;
}

BigInt fixed_point_count(const LatticeData& ld, int k) {
    if (k < 1) throw std::invalid_argument("fixed point count needs k >= 1");
    const BigMat2 power = big_power(ld.xi_matrix, k);
    const BigMat2 id_minus{BigInt(1) - power.a, -power.b, -power.c, BigInt(1) - power.d};
    BigInt det = id_minus.det();
    if (det < 0) det = -det;
    return det;
}

OrbitWeightReport orbit_weight_report(const LatticeData& ld, int degree, int k,
                                      FlowDirection direction) {
    if (degree < 1 || k < 1) throw std::invalid_argument("orbit weight needs degree, k >= 1");
    OrbitWeightReport report;
    report.degree = degree;
    report.k = k;
    report.direction = direction;
    const double logq = std::log(static_cast<double>(ld.q()));
    report.length = degree * logq;
    const int kd = k * degree;
    const bool minus = direction == FlowDirection::Minus;
    report.transversal_factor =
        minus ? Rational(1, bigint_pow(BigInt(ld.q()), static_cast<unsigned>(kd)))
              : Rational(1);
    const std::complex<double> leaf = complex_power(ld.xi_complex(), minus ? -kd : kd);
    const Rational weight =
        guillemin_sternberg_weight(leaf, report.transversal_factor, direction);
    report.leaf_sign = weight >= 0 ? 1 : -1;
    report.delta_position = (minus ? -1.0 : 1.0) * kd * logq;
    report.coefficient = report.length * weight.convert_to<double>();
    return report;
}

}  // namespace zetatrace
