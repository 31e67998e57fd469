#pragma once

#include <cstdint>
#include <vector>

namespace zetatrace {

/// Element of F_{p^f} as polynomial coefficients c[0] + c[1] t + ... of
/// length f, each in [0, p), reduced modulo the field's irreducible modulus.
using FieldElement = std::vector<int64_t>;

/// Arithmetic context for F_{p^f}, q = p^f.
///
/// The modulus is a monic irreducible of degree f over F_p: user-supplied,
/// taken from the shipped table (p in {2, 3}, f <= 4), or found by
/// deterministic search over ascending base-p coefficient encodings.
/// Irreducibility is verified at construction by trial division against
/// every monic polynomial of degree at most f/2.
class FiniteField {
public:
    FiniteField(int64_t p, int f);
    FiniteField(int64_t p, int f, std::vector<int64_t> modulus);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    int64_t q() const { return q_; }
    /// Monic modulus as f + 1 coefficients, constant term first.
    const std::vector<int64_t>& modulus() const { return modulus_; }

    FieldElement zero() const;
    FieldElement one() const;
    /// Decodes n mod q into base-p coefficient digits.
    FieldElement from_integer(int64_t n) const;
    /// Inverse of from_integer.
    int64_t to_integer(const FieldElement& a) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement pow(const FieldElement& a, int64_t e) const;
    /// Multiplicative inverse of a nonzero element.
    FieldElement inv(const FieldElement& a) const;

    bool is_zero(const FieldElement& a) const;
    bool equal(const FieldElement& a, const FieldElement& b) const;

    /// Quadratic character for odd q: 0 for zero, +1 for a nonzero square,
    /// -1 for a nonsquare, decided by a^((q-1)/2).
    int quadratic_character(const FieldElement& a) const;

private:
    void validate_modulus() const;

    int64_t p_ = 0;
    int f_ = 0;
    int64_t q_ = 0;
    std::vector<int64_t> modulus_;
};

}  // namespace zetatrace
