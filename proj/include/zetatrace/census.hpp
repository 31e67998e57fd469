#pragma once

#include "zetatrace/curve.hpp"
#include "zetatrace/errors.hpp"
#include "zetatrace/exact.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace zetatrace {

/// Moebius function for n >= 1.
int mobius(int n);

/// Frobenius power sum t_n = xi^n + conj(xi)^n via t_0 = 2, t_1 = a,
/// t_{k+1} = a t_k - q t_{k-1}, in exact integers.
BigInt frobenius_power_trace(const ZetaData& zd, int n);

/// #E(F_{q^n}) = q^n + 1 - t_n, exact.
BigInt extension_count(const ZetaData& zd, int n);

struct CensusLine {
    int degree = 0;      // d
    BigInt point_count;  // N_d
    BigInt orbit_count;  // B_d, closed points of degree d
    double length = 0.0; // d log q
};

struct ClosedPointCensus {
    int64_t q = 0;
    int max_degree = 0;
    std::vector<CensusLine> lines;
};

/// Closed-point counts B_d = (1/d) sum_{e | d} mu(d/e) N_e for d <= max_degree.
/// Throws InternalInconsistencyError if any B_d is non-integral or negative.
ClosedPointCensus closed_point_census(const ZetaData& zd, int max_degree);

struct OrbitLine {
    int degree = 0;      // d
    double length = 0.0; // d log q
    BigInt multiplicity; // B_d
};

/// Orbit lengths d log q with multiplicities B_d, for d log q <= max_length.
std::vector<OrbitLine> orbit_census(const ZetaData& zd, double max_length);

/// CSV with header "d,N_d,B_d,length".
std::string census_csv(const ClosedPointCensus& census);
std::string census_json(const ClosedPointCensus& census);

}  // namespace zetatrace
