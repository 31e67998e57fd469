#include "zetatrace/finite_field.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace zetatrace {

namespace {

bool is_prime(int64_t p) {
    if (p < 2) return false;
    for (int64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

int64_t mod_p(int64_t v, int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

/// Coefficients of (dividend mod divisor) over F_p; divisor is monic.
std::vector<int64_t> poly_rem(std::vector<int64_t> dividend, const std::vector<int64_t>& divisor,
                              int64_t p) {
    const int dd = static_cast<int>(divisor.size()) - 1;
    for (int i = static_cast<int>(dividend.size()) - 1; i >= dd; --i) {
        const int64_t c = dividend[i];
        if (c == 0) continue;
        for (int j = 0; j <= dd; ++j) {
            dividend[i - dd + j] = mod_p(dividend[i - dd + j] - c * divisor[j], p);
        }
    }
    dividend.resize(dd);
    return dividend;
}

bool divides(const std::vector<int64_t>& divisor, const std::vector<int64_t>& poly, int64_t p) {
    const auto rem = poly_rem(poly, divisor, p);
    return std::all_of(rem.begin(), rem.end(), [](int64_t c) { return c == 0; });
}

/// Monic polynomial of degree deg with coefficient tuple encoding `code`.
std::vector<int64_t> decode_monic(int64_t code, int deg, int64_t p) {
    std::vector<int64_t> poly(deg + 1, 0);
    for (int i = 0; i < deg; ++i) {
        poly[i] = code % p;
        code /= p;
    }
    poly[deg] = 1;
    return poly;
}

bool is_irreducible(const std::vector<int64_t>& poly, int64_t p) {
    const int deg = static_cast<int>(poly.size()) - 1;
    for (int d = 1; 2 * d <= deg; ++d) {
        int64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (int64_t code = 0; code < count; ++code) {
            if (divides(decode_monic(code, d, p), poly, p)) return false;
        }
    }
    return true;
}

/// Conway polynomials shipped for p in {2, 3}, f <= 4, constant term first.
const std::vector<int64_t>* conway_modulus(int64_t p, int f) {
    static const std::vector<int64_t> tbl_2[] = {{1, 1}, {1, 1, 1}, {1, 1, 0, 1}, {1, 1, 0, 0, 1}};
    static const std::vector<int64_t> tbl_3[] = {{1, 1}, {2, 2, 1}, {1, 2, 0, 1}, {2, 0, 0, 2, 1}};
    if (f < 1 || f > 4) return nullptr;
    if (p == 2) return &tbl_2[f - 1];
    if (p == 3) return &tbl_3[f - 1];
    return nullptr;
}

std::vector<int64_t> default_modulus(int64_t p, int f) {
    if (const auto* shipped = conway_modulus(p, f)) return *shipped;
    int64_t count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (int64_t code = 0; code < count; ++code) {
        auto candidate = decode_monic(code, f, p);
        if (is_irreducible(candidate, p)) return candidate;
    }
    throw std::logic_error("no monic irreducible of degree " + std::to_string(f));
}

}  // namespace

FiniteField::FiniteField(int64_t p, int f) : p_(p), f_(f) {
    if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (f < 1 || f > 12) throw std::invalid_argument("field extension degree must be in [1, 12]");
    q_ = 1;
    for (int i = 0; i < f; ++i) {
        if (q_ > (int64_t(1) << 40) / p) throw std::invalid_argument("field size too large");
        q_ *= p;
    }
    modulus_ = default_modulus(p, f);
    validate_modulus();
}

FiniteField::FiniteField(int64_t p, int f, std::vector<int64_t> modulus) : FiniteField(p, f) {
    for (auto& c : modulus) c = mod_p(c, p);
    modulus_ = std::move(modulus);
    validate_modulus();
}

void FiniteField::validate_modulus() const {
    if (modulus_.size() != static_cast<size_t>(f_) + 1 || modulus_.back() != 1) {
        throw std::invalid_argument("modulus must be monic of degree f");
    }
    if (!is_irreducible(modulus_, p_)) {
        throw std::invalid_argument("modulus is reducible over F_p");
    }
}

FieldElement FiniteField::zero() const { return FieldElement(f_, 0); }

FieldElement FiniteField::one() const {
    FieldElement e(f_, 0);
    e[0] = 1;
    return e;
}

FieldElement FiniteField::from_integer(int64_t n) const {
    n = mod_p(n, q_);
    FieldElement e(f_, 0);
    for (int i = 0; i < f_; ++i) {
        e[i] = n % p_;
        n /= p_;
    }
    return e;
}

int64_t FiniteField::to_integer(const FieldElement& a) const {
    int64_t n = 0;
    for (int i = f_ - 1; i >= 0; --i) n = n * p_ + a[i];
    return n;
}

FieldElement FiniteField::add(const FieldElement& a, const FieldElement& b) const {
    FieldElement out(f_);
    for (int i = 0; i < f_; ++i) out[i] = mod_p(a[i] + b[i], p_);
    return out;
}

FieldElement FiniteField::sub(const FieldElement& a, const FieldElement& b) const {
    FieldElement out(f_);
    for (int i = 0; i < f_; ++i) out[i] = mod_p(a[i] - b[i], p_);
    return out;
}

FieldElement FiniteField::neg(const FieldElement& a) const {
    FieldElement out(f_);
    for (int i = 0; i < f_; ++i) out[i] = mod_p(-a[i], p_);
    return out;
}

FieldElement FiniteField::mul(const FieldElement& a, const FieldElement& b) const {
    std::vector<int64_t> prod(2 * f_ - 1, 0);
    for (int i = 0; i < f_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f_; ++j) {
            prod[i + j] = mod_p(prod[i + j] + a[i] * b[j], p_);
        }
    }
    for (int i = 2 * f_ - 2; i >= f_; --i) {
        const int64_t c = prod[i];
        if (c == 0) continue;
        for (int j = 0; j < f_; ++j) {
            prod[i - f_ + j] = mod_p(prod[i - f_ + j] - c * modulus_[j], p_);
        }
        prod[i] = 0;
    }
    prod.resize(f_);
    return prod;
}

FieldElement FiniteField::pow(const FieldElement& a, int64_t e) const {
    if (e < 0) throw std::invalid_argument("pow: exponent must be nonnegative");
    FieldElement base = a;
    FieldElement out = one();
    while (e != 0) {
        if (e & 1) out = mul(out, base);
        base = mul(base, base);
        e >>= 1;
    }
    return out;
}

FieldElement FiniteField::inv(const FieldElement& a) const {
    if (is_zero(a)) throw std::invalid_argument("inv: zero is not invertible");
    return pow(a, q_ - 2);
}

bool FiniteField::is_zero(const FieldElement& a) const {
    return std::all_of(a.begin(), a.end(), [](int64_t c) { return c == 0; });
}

bool FiniteField::equal(const FieldElement& a, const FieldElement& b) const { return a == b; }

int FiniteField::quadratic_character(const FieldElement& a) const {
    if (p_ == 2) throw std::invalid_argument("quadratic character requires odd characteristic");
    if (is_zero(a)) return 0;
    const FieldElement r = pow(a, (q_ - 1) / 2);
    return equal(r, one()) ? 1 : -1;
}

}  // namespace zetatrace
