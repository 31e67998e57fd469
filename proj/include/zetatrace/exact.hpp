#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

namespace zetatrace {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// base^e for e >= 0 in exact integers.
inline BigInt bigint_pow(BigInt base, unsigned e) {
    BigInt out = 1;
    while (e != 0) {
        if (e & 1u) out *= base;
        base *= base;
        e >>= 1u;
    }
    return out;
}

/// Exact p-adic valuation of a nonzero integer.
inline int padic_valuation(BigInt v, int64_t p) {
    if (v == 0) throw std::invalid_argument("padic_valuation: zero has no finite valuation");
    if (v < 0) v = -v;
    int k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

}  // namespace zetatrace
