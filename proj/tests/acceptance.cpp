// Acceptance gate: one pass/fail line per criterion, pinned tolerances below.
// Exit code 0 iff every criterion passes.

#include "zetatrace/census.hpp"
#include "zetatrace/curve.hpp"
#include "zetatrace/explicit_formula.hpp"
#include "zetatrace/padic.hpp"
#include "zetatrace/tate.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace zetatrace;

namespace {

// Pinned tolerances.
constexpr double kFormulaTol = 1e-8;     // criterion 1 residual slack on top of tail_bound
constexpr double kTailRatioMax = 0.5;    // criterion 2 tail shrink factor per doubling
constexpr double kDissymmetrySlack = 1e-12;  // criterion 4 relative float slack
constexpr double kCommutatorTol = 1e-12;     // criterion 5 sup-norm slack
constexpr double kFunctionalEqTol = 1e-10;   // criterion 8 relative residual
constexpr int kSweepNuMax = 256;             // criterion 1 truncation (<= 1024 allowed)
constexpr double kSweepBudgetSeconds = 60.0; // criterion 1 runtime budget
constexpr int kEulerDepth = 12;              // criterion 8 census depth D

const int64_t kSweepPrimes[] = {5, 7, 11, 13};

std::vector<ZetaData> sweep_curves() {
    std::vector<ZetaData> out;
    for (const int64_t p : kSweepPrimes) {
        FiniteField field(p, 1);
        out.push_back(zeta_data(make_curve(field, field.from_integer(1), field.from_integer(0))));
        out.push_back(zeta_data(make_curve(field, field.from_integer(0), field.from_integer(1))));
    }
    return out;
}

/// Ten smooth bumps whose supports cover every position +-{1,2,3} d log q,
/// d <= 3 (products {1,2,3,4,6,9} log q, both signs, and 0).
std::vector<TestFunction> sweep_bumps(double logq) {
    std::vector<TestFunction> out;
    for (const double c : {1.5, 3.45, 6.0, 9.0}) {
        out.push_back(make_test_function(TestFunctionKind::Bump, c * logq, 1.1 * logq, 1.0));
        out.push_back(make_test_function(TestFunctionKind::Bump, -c * logq, 1.1 * logq, 1.0));
    }
    out.push_back(make_test_function(TestFunctionKind::Bump, 0.0, 0.4 * logq, 1.0));
    out.push_back(make_test_function(TestFunctionKind::Bump, 0.0, 3.3 * logq, 1.0));
    return out;
}

struct SweepRun {
    const ZetaData* zd;
    TestFunction alpha;
    TraceReport report;
};

struct SweepResult {
    std::vector<ZetaData> curves;
    std::vector<SweepRun> runs;
    double elapsed_seconds = 0.0;
};

SweepResult run_sweep() {
    SweepResult result;
    result.curves = sweep_curves();
    const auto start = std::chrono::steady_clock::now();
    for (const ZetaData& zd : result.curves) {
        const double logq = std::log(static_cast<double>(zd.q));
        for (const TestFunction& alpha : sweep_bumps(logq)) {
            SweepRun run{&zd, alpha, verify_trace_formula(zd, alpha, kSweepNuMax)};
            result.runs.push_back(std::move(run));
        }
    }
    const auto stop = std::chrono::steady_clock::now();
    result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    return result;
}

bool criterion1(const SweepResult& sweep) {
    // Sanity: the bump supports really cover the advertised positions.
    for (const int64_t p : kSweepPrimes) {
        const double logq = std::log(static_cast<double>(p));
        const auto bumps = sweep_bumps(logq);
        for (const int product : {0, 1, 2, 3, 4, 6, 9}) {
            for (const int sign : {1, -1}) {
                bool covered = false;
                for (const TestFunction& alpha : bumps) {
                    covered = covered || alpha(sign * product * logq) > 0.0;
                }
                if (!covered) {
                    std::printf("C1 FAIL trace-formula sweep: position %+d log q uncovered\n",
                                sign * product);
                    return false;
                }
            }
        }
    }

    double worst_residual = 0.0, worst_allowance = 0.0;
    int failures = 0;
    for (const SweepRun& run : sweep.runs) {
        if (!run.report.pass) ++failures;
        if (run.report.residual > worst_residual) {
            worst_residual = run.report.residual;
            worst_allowance = run.report.formula_tol + run.report.tail_bound;
        }
    }
    const bool in_budget = sweep.elapsed_seconds <= kSweepBudgetSeconds;
    const bool ok = failures == 0 && in_budget;
    std::printf(
        "C1 %s trace-formula sweep: %zu curves x 10 bumps at nu_max=%d, %d residual "
        "failure(s), worst residual %.3g (allowed %.3g), elapsed %.1f s (budget %.0f s)\n",
        ok ? "PASS" : "FAIL", sweep.curves.size(), kSweepNuMax, failures, worst_residual,
        worst_allowance, sweep.elapsed_seconds, kSweepBudgetSeconds);
    return ok;
}

bool criterion2(const SweepResult& sweep) {
    // Part A: every vertical family in the sweep agrees with the independent
    // finite Poisson resummation to within its own tail bound.
    int disagreements = 0;
    double worst_margin = 0.0;  // error / tail_bound, want <= 1
    for (const SweepRun& run : sweep.runs) {
        for (const SpectralFamily& fam : run.report.spectral.families) {
            const std::complex<double> want =
                oracle::poisson_spectral_value(run.alpha, fam.rho, run.zd->q);
            const double err = std::abs(fam.value - want);
            if (err > fam.tail_bound) ++disagreements;
            if (fam.tail_bound > 0.0) {
                worst_margin = std::max(worst_margin, err / fam.tail_bound);
            }
        }
    }

    // Part B: tail bounds halve (at least) under nu_max doubling on a narrow
    // bump that keeps the last term above the quadrature noise floor.
    int ratio_failures = 0;
    double worst_ratio = 0.0;
    for (const ZetaData& zd : sweep.curves) {
        const double logq = std::log(static_cast<double>(zd.q));
        const TestFunction narrow =
            make_test_function(TestFunctionKind::Bump, logq, 0.048 * logq, 1.0);
        const SpectralInput input = spectral_input(zd, narrow.support_radius());
        std::vector<std::complex<double>> rhos = {{0.0, 0.0}, {1.0, 0.0}};
        rhos.insert(rhos.end(), input.zeros.begin(), input.zeros.end());
        for (const auto& rho : rhos) {
            double previous = -1.0;
            for (const int nu_max : {64, 128, 256, 512, 1024}) {
                const SpectralFamily fam = spectral_sum(narrow, rho, zd.q, nu_max);
                if (previous > 0.0) {
                    const double ratio = fam.tail_bound / previous;
                    worst_ratio = std::max(worst_ratio, ratio);
                    if (!(ratio < kTailRatioMax)) ++ratio_failures;
                }
                previous = fam.tail_bound;
            }
        }
    }

    const bool ok = disagreements == 0 && ratio_failures == 0;
    std::printf(
        "C2 %s Poisson-oracle equivalence: %zu families checked, %d beyond tail_bound "
        "(worst error/tail %.3g); doubling ladder 64..1024, %d ratio failure(s), worst "
        "ratio %.3g (limit %.2f)\n",
        ok ? "PASS" : "FAIL", sweep.runs.size() * 4, disagreements, worst_margin,
        ratio_failures, worst_ratio, kTailRatioMax);
    return ok;
}

bool criterion3() {
    const int64_t primes[] = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    std::mt19937_64 rng(20260822);
    int built = 0, exact_line = 0, exact_norm = 0;
    while (built < 200) {
        const int64_t p = primes[rng() % 10];
        const int64_t a4 = static_cast<int64_t>(rng() % static_cast<uint64_t>(p));
        const int64_t a6 = static_cast<int64_t>(rng() % static_cast<uint64_t>(p));
        if ((4 * a4 * a4 * a4 + 27 * a6 * a6) % p == 0) continue;  // singular
        FiniteField field(p, 1);
        const ZetaData zd = zeta_data(make_curve(field, field.from_integer(a4),
                                                 field.from_integer(a6)));
        ++built;
        const auto zeros = zd.zeros();
        if (zeros[0].real() == 0.5 && zeros[1].real() == 0.5) ++exact_line;
        if (zd.xi_norm_squared_exact() == Rational(zd.q)) ++exact_norm;
    }
    const bool ok = exact_line == 200 && exact_norm == 200;
    std::printf(
        "C3 %s critical line at g=1: 200 random curves, Re rho exactly 1/2 on %d, "
        "|xi|^2 = q exact on %d\n",
        ok ? "PASS" : "FAIL", exact_line, exact_norm);
    return ok;
}

bool criterion4() {
    int pairs = 0, failures = 0;
    double worst = 0.0;
    for (const ZetaData& zd : sweep_curves()) {
        const double logq = std::log(static_cast<double>(zd.q));
        const TestFunction even =
            make_test_function(TestFunctionKind::Bump, 0.0, 9.2 * logq, 1.0);
        const SpectralInput input = spectral_input(zd, even.support_radius());
        const GeometricSide side = geometric_side(input, even);
        for (int d = 1; d <= 3; ++d) {
            for (int k = 1; k <= 3; ++k) {
                const OrbitTerm* fwd = nullptr;
                const OrbitTerm* bwd = nullptr;
                for (const OrbitTerm& term : side.terms) {
                    if (term.degree == d && term.k == k) fwd = &term;
                    if (term.degree == d && term.k == -k) bwd = &term;
                }
                if (fwd == nullptr || bwd == nullptr || fwd->value == 0.0) {
                    ++failures;
                    continue;
                }
                const double expected =
                    std::pow(static_cast<double>(zd.q), -static_cast<double>(k * d));
                const double rel = std::abs(bwd->value / fwd->value - expected) / expected;
                worst = std::max(worst, rel);
                if (rel > kDissymmetrySlack) ++failures;
                ++pairs;
            }
        }
    }
    const bool ok = failures == 0 && pairs == 8 * 9;
    std::printf(
        "C4 %s dissymmetry coefficients: %d (d,k) pairs across 8 curves, backward/forward "
        "= q^{-kd} with worst relative error %.3g (slack %.0e)\n",
        ok ? "PASS" : "FAIL", pairs, worst, kDissymmetrySlack);
    return ok;
}

bool criterion5() {
    // Part A: Delta_p commutes with 50 random unit affine maps for p in {2,3}
    // on (Z/p^2)^2.
    std::mt19937_64 rng(5081);
    double worst = 0.0;
    for (const int64_t p : {int64_t{2}, int64_t{3}}) {
        const int64_t pn = p * p;
        for (int sample = 0; sample < 50; ++sample) {
            PAdicAffineMap g;
            do {
                std::vector<std::vector<int64_t>> linear(2, std::vector<int64_t>(2));
                std::vector<int64_t> shift(2);
                for (auto& row : linear) {
                    for (auto& e : row) e = static_cast<int64_t>(rng() % pn);
                }
                for (auto& e : shift) e = static_cast<int64_t>(rng() % pn);
                g = make_affine_map(p, 2, std::move(linear), std::move(shift));
            } while (!g.unit());

            TransversalFunction u = make_transversal_function(p, 2, 2);
            for (auto& v : u.values) {
                const double re = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
                const double im = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
                v = {re, im};
            }
            const TransversalFunction lhs = delta_p(conjugate_by_affine(g, u));
            const TransversalFunction rhs = conjugate_by_affine(g, delta_p(u));
            for (size_t i = 0; i < lhs.values.size(); ++i) {
                worst = std::max(worst, std::abs(lhs.values[i] - rhs.values[i]));
            }
        }
    }
    const bool commute_ok = worst <= kCommutatorTol;

    // Part B: exhaustive conductor invariance under the transpose action at
    // p=2, n=2, m=2: all of GL_2(Z/4) against all 16 characters.
    const auto chars = enumerate_characters(2, 2, 2);
    int units = 0, mismatches = 0;
    for (int64_t a = 0; a < 4; ++a) {
        for (int64_t b = 0; b < 4; ++b) {
            for (int64_t c = 0; c < 4; ++c) {
                for (int64_t d = 0; d < 4; ++d) {
                    const PAdicAffineMap g = make_affine_map(2, 2, {{a, b}, {c, d}}, {0, 0});
                    if (!g.unit()) continue;
                    ++units;
                    for (const PCharacter& chi : chars) {
                        if (char_norm(transpose_character(g, chi)) != char_norm(chi)) {
                            ++mismatches;
                        }
                    }
                }
            }
        }
    }
    const bool transpose_ok = units == 96 && mismatches == 0;

    const bool ok = commute_ok && transpose_ok;
    std::printf(
        "C5 %s p-adic invariance: 100 random conjugations commute with Delta_p to %.3g "
        "(tol %.0e); transpose conductor invariance exact over %d unit maps x 16 "
        "characters (%d mismatches)\n",
        ok ? "PASS" : "FAIL", worst, kCommutatorTol, units, mismatches);
    return ok;
}

bool criterion6() {
    const int precision_n = 4;
    bool ok = true;
    std::string detail;
    for (const LatticeData& ld :
         {gaussian_integer_lattice(), eisenstein_root_lattice(), generic_cm_lattice()}) {
        const int64_t q = ld.q();
        const TransversalFunction shape = make_transversal_function(q, precision_n, 2);
        std::vector<std::vector<int64_t>> cells;
        cells.reserve(static_cast<size_t>(shape.size()));
        for (int64_t i = 0; i < shape.size(); ++i) cells.push_back(shape.theta_of(i));

        Mat2 power = Mat2::identity();
        for (int nu = 1; nu <= 3; ++nu) {
            power = power.mul(ld.xi_matrix);
            const PAdicAffineMap g = make_affine_map(
                q, precision_n, {{power.a, power.b}, {power.c, power.d}}, {0, 0});
            const HaarScalingReport rep = haar_scaling_check(g, cells);
            const Rational expected(1, bigint_pow(BigInt(q), static_cast<unsigned>(nu)));
            if (rep.ratio != expected || rep.valuation != nu) {
                ok = false;
                detail = " (q=" + std::to_string(q) + ", nu=" + std::to_string(nu) + " off)";
            }
        }
    }
    std::printf(
        "C6 %s Haar scaling: mu(xi^nu A)/mu(A) = q^{-nu} exactly on 3 lattice models, "
        "nu <= 3, precision n=%d%s\n",
        ok ? "PASS" : "FAIL", precision_n, detail.c_str());
    return ok;
}

bool criterion7() {
    bool ok = true;
    int levels = 0;
    std::string detail;
    for (const LatticeData& ld :
         {gaussian_integer_lattice(), eisenstein_root_lattice(), generic_cm_lattice()}) {
        const int64_t q = ld.q();
        BigInt expected = 1;
        for (int nu = 1; nu <= 16; ++nu) {
            expected *= q;
            if (quotient_count(ld, nu) != expected) {
                ok = false;
                detail = " (index at q=" + std::to_string(q) + " broke)";
            }
            if (expected <= 10000) {
                const BijectivityReport rep = one_minus_xi_bijectivity(ld, nu);
                if (!rep.bijective || rep.quotient_size != expected) {
                    ok = false;
                    detail = " (bijectivity at q=" + std::to_string(q) +
                             ", nu=" + std::to_string(nu) + " broke)";
                }
                ++levels;
            }
        }
    }
    std::printf(
        "C7 %s quotient and bijectivity: [Gamma : xi^nu Gamma] = q^nu through nu=16, and "
        "x -> x - xi x bijective exhaustively on %d levels with q^nu <= 10^4%s\n",
        ok ? "PASS" : "FAIL", levels, detail.c_str());
    return ok;
}

bool criterion8() {
    double worst_fe = 0.0;
    double worst_euler_margin = 0.0;  // error / bound, want <= 1
    int failures = 0;
    for (const ZetaData& zd : sweep_curves()) {
        for (int j = 1; j <= 20; ++j) {
            const std::complex<double> s(0.05 + 0.045 * j, 0.3 * j - 3.0);
            const double residual = functional_equation_residual(zd, s);
            worst_fe = std::max(worst_fe, residual);
            if (residual > kFunctionalEqTol) ++failures;
        }

        const ClosedPointCensus census = closed_point_census(zd, kEulerDepth);
        const double zeta2 = zeta_eval(zd, {2.0, 0.0}).real();
        const double q = static_cast<double>(zd.q);
        double log_product = 0.0;
        for (const auto& line : census.lines) {
            log_product -= static_cast<double>(line.orbit_count) *
                           std::log1p(-std::pow(q, -2.0 * line.degree));
        }
        const double partial = std::exp(log_product);
        const double bound =
            4.0 * std::abs(zeta2) * std::pow(q, -(kEulerDepth + 1.0)) / (kEulerDepth + 1.0) +
            1e-12;
        const double err = std::abs(partial - zeta2);
        worst_euler_margin = std::max(worst_euler_margin, err / bound);
        if (err > bound) ++failures;
    }
    const bool ok = failures == 0;
    std::printf(
        "C8 %s functional equation and Euler product: 20-point grid per curve, worst "
        "relative residual %.3g (tol %.0e); degree-%d partial products within bound "
        "(worst error/bound %.3g)\n",
        ok ? "PASS" : "FAIL", worst_fe, kFunctionalEqTol, kEulerDepth, worst_euler_margin);
    return ok;
}

}  // namespace

int main() {
    std::printf("acceptance: two-sided trace identity library\n");
    const SweepResult sweep = run_sweep();
    int passed = 0;
    const bool results[] = {
        criterion1(sweep), criterion2(sweep), criterion3(), criterion4(),
        criterion5(),      criterion6(),      criterion7(), criterion8(),
    };
    for (const bool r : results) passed += r ? 1 : 0;
    std::printf("acceptance: %d/8 criteria passed\n", passed);
    return passed == 8 ? 0 : 1;
}
