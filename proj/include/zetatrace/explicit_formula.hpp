#pragma once

#include "zetatrace/census.hpp"
#include "zetatrace/curve.hpp"
#include "zetatrace/exact.hpp"
#include "zetatrace/flow.hpp"
#include "zetatrace/quadrature.hpp"
#include "zetatrace/test_function.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace zetatrace {

/// Shared numeric defaults for the formula pipeline and the CLI.
struct FormulaOptions {
    double quadrature_tol = 1e-12;
    double formula_tol = 1e-8;
};

/// Phi(s) = integral e^{s t} alpha(t) dt, absolute quadrature target abs_tol.
std::complex<double> phi_transform(const TestFunction& alpha, std::complex<double> s,
                                   double abs_tol = 1e-12);

/// One vertical family: sum over |nu| <= nu_max of Phi(rho + 2 pi i nu / log q).
///
/// tail_bound is the documented heuristic
///   max(|first term|, |last term|) * nu_max * 10 + quadrature_tol * (2 nu_max + 1);
/// the finite Poisson identity supplies the rigorous cross-check in the tests.
struct SpectralFamily {
    std::complex<double> rho;
    std::complex<double> value;
    double tail_bound = 0.0;
    std::vector<std::complex<double>> terms;  // index nu + nu_max
};

SpectralFamily spectral_sum(const TestFunction& alpha, std::complex<double> rho, int64_t q,
                            int nu_max, const FormulaOptions& opts = {});

/// Pluggable spectral/geometric input: 2 genus zeros on Re = 1/2 plus the
/// orbit multiplicities B_d (index d - 1).
struct SpectralInput {
    int genus = 1;
    int64_t q = 0;
    std::vector<std::complex<double>> zeros;
    std::vector<BigInt> orbit_counts;
};

/// Builds the plug-in input for a counted curve; the census is taken deep
/// enough for any test function with support radius <= max_support_radius.
SpectralInput spectral_input(const ZetaData& zd, double max_support_radius);

/// h0 - h1 + h2: pole family at 0, zero families summed, pole family at 1.
struct SpectralSide {
    double h0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double value = 0.0;
    double tail_bound = 0.0;
    int nu_max = 0;
    std::vector<SpectralFamily> families;  // pole 0, zeros..., pole 1
};

SpectralSide spectral_side(const SpectralInput& input, const TestFunction& alpha, int nu_max,
                           const FormulaOptions& opts = {});

/// One orbit contribution at degree d, traversal k: k > 0 sits at +k d log q
/// with factor 1, k < 0 sits at k d log q with factor q^{k d}.
struct OrbitTerm {
    int degree = 0;
    int k = 0;
    double position = 0.0;
    double value = 0.0;
};

struct GeometricSide {
    double euler_term = 0.0;  // (2 - 2 genus) alpha(0) log q
    double orbit_sum = 0.0;
    double value = 0.0;
    int max_degree = 0;
    std::vector<OrbitTerm> terms;
};

GeometricSide geometric_side(const SpectralInput& input, const TestFunction& alpha);

struct TraceReport {
    SpectralSide spectral;
    GeometricSide geometric;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tail_bound = 0.0;
    double formula_tol = 0.0;
    bool pass = false;
};

/// Computes both sides and their residual; pass means
/// residual <= formula_tol + tail_bound.
TraceReport verify_trace_formula(const SpectralInput& input, const TestFunction& alpha,
                                 int nu_max, const FormulaOptions& opts = {});
TraceReport verify_trace_formula(const ZetaData& zd, const TestFunction& alpha, int nu_max,
                                 const FormulaOptions& opts = {});

/// {"lhs":..,"rhs":..,"residual":..,"tail_bound":..,"per_term":[..]}
std::string trace_report_json(const TraceReport& report);

/// CSV of truncated partial sums per nu: "nu,h0,h1,h2,lhs_partial".
std::string trace_plot_csv(const TraceReport& report);

/// Sign of sum_j (-1)^j tr Lambda^j M^T = det(I - M) for a real 2x2 return
/// differential; throws std::domain_error when |det(I - M)| < 1e-9.
int alternating_trace_sign(const std::array<std::array<double, 2>, 2>& m);

/// Local fixed-point weight: the alternating leafwise trace sign for the
/// complex return differential, times the transversal delta factor (1 for
/// direction +, the supplied rational, typically q^{-k d}, for direction -).
/// Throws std::domain_error when |leaf_jacobian - 1| < 1e-9 (degenerate).
Rational guillemin_sternberg_weight(std::complex<double> leaf_jacobian,
                                    const Rational& transversal_factor, FlowDirection direction);

}  // namespace zetatrace
