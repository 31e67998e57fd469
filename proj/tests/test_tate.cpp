#include "zetatrace/tate.hpp"

#include "zetatrace/census.hpp"
#include "zetatrace/curve.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

using namespace zetatrace;

namespace {

std::vector<LatticeData> model_lattices() {
    return {gaussian_integer_lattice(), eisenstein_root_lattice(), generic_cm_lattice()};
}

}  // namespace

TEST_CASE("model lattices have the advertised multiplier data") {
    const LatticeData gauss = gaussian_integer_lattice();
    CHECK(gauss.q() == 2);
    CHECK(gauss.trace() == 2);
    CHECK(std::abs(gauss.xi_complex() - std::complex<double>(1.0, 1.0)) <= 1e-12);

    const LatticeData eis = eisenstein_root_lattice();
    CHECK(eis.q() == 3);
    CHECK(eis.trace() == 0);
    CHECK(std::abs(eis.xi_complex() - std::complex<double>(0.0, std::sqrt(3.0))) <= 1e-12);

    const LatticeData gen = generic_cm_lattice();
    CHECK(gen.q() == 5);
    CHECK(gen.trace() == 1);

    for (const LatticeData& ld : model_lattices()) {
        CHECK(std::abs(std::norm(ld.xi_complex()) - static_cast<double>(ld.q())) <= 1e-10);
        // Matrix action on periods realizes multiplication by xi.
        for (const LatticePoint g : {LatticePoint{1, 0}, LatticePoint{0, 1},
                                     LatticePoint{3, -2}}) {
            const std::complex<double> direct = ld.xi_complex() * ld.embed(g);
            const std::complex<double> via_matrix = ld.embed(ld.xi_matrix.apply(g));
            CHECK(std::abs(direct - via_matrix) <= 1e-9 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("lattice validation rejects broken inputs") {
    const LatticeData gauss = gaussian_integer_lattice();
    // det 1 multiplier.
    CHECK_THROWS_AS(make_lattice(gauss.omega1, gauss.omega2, Mat2{1, 0, 0, 1}),
                    std::invalid_argument);
    // Real eigenvalues (trace^2 > 4 det).
    CHECK_THROWS_AS(make_lattice(gauss.omega1, gauss.omega2, Mat2{3, 0, 0, 1}),
                    std::invalid_argument);
    // R-dependent periods.
    CHECK_THROWS_AS(make_lattice({1.0, 0.0}, {2.0, 0.0}, gauss.xi_matrix),
                    std::invalid_argument);
    // Matrix inconsistent with the embedding.
    CHECK_THROWS_AS(make_lattice(gauss.omega1, gauss.omega2, Mat2{1, 1, -1, 1}),
                    std::invalid_argument);
}

TEST_CASE("digit sets are frozen per model") {
    CHECK(digit_set(gaussian_integer_lattice()) ==
          std::vector<LatticePoint>{{0, 0}, {1, 0}});
    CHECK(digit_set(eisenstein_root_lattice()) ==
          std::vector<LatticePoint>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(digit_set(generic_cm_lattice()) ==
          std::vector<LatticePoint>{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}});
}

TEST_CASE("quotient sizes are exact powers of q") {
    for (const LatticeData& ld : model_lattices()) {
        CHECK(quotient_count(ld, 0) == BigInt(1));
        BigInt expected = 1;
        for (int nu = 1; nu <= 20; ++nu) {
            expected *= ld.q();
            CHECK(quotient_count(ld, nu) == expected);
        }
    }
    CHECK(quotient_count(gaussian_integer_lattice(), 3) == BigInt(8));
}

TEST_CASE("digit expansion round trips through its value") {
    for (const LatticeData& ld : model_lattices()) {
        for (const LatticePoint gamma : {LatticePoint{0, 0}, LatticePoint{1, 0},
                                         LatticePoint{2, 0}, LatticePoint{0, 1},
                                         LatticePoint{-3, 2}, LatticePoint{7, -5}}) {
            const TateDigits t = expand_element(ld, gamma, 5);
            REQUIRE(t.digits.size() == 5);
            const LatticePoint value = digits_value(ld, t);
            // value and gamma agree mod xi^5: their difference re-expands to 0.
            const LatticePoint diff{gamma[0] - value[0], gamma[1] - value[1]};
            const TateDigits zero = expand_element(ld, diff, 5);
            for (const LatticePoint& digit : zero.digits) {
                CHECK(digit == LatticePoint{0, 0});
            }
            // The canonical representative is reproducible.
            const TateDigits again = expand_element(ld, value, 5);
            CHECK(again.digits == t.digits);
        }
    }
}

TEST_CASE("the window of 2 in the gaussian model is 0011") {
    const TateDigits t = expand_element(gaussian_integer_lattice(), {2, 0}, 4);
    CHECK(t.digits == std::vector<LatticePoint>{{0, 0}, {0, 0}, {1, 0}, {1, 0}});
}

TEST_CASE("xi multiplication shifts digit windows") {
    const LatticeData ld = gaussian_integer_lattice();
    const TateDigits t = expand_element(ld, {1, 0}, 4);
    const TateDigits shifted = xi_multiply(ld, t);
    CHECK(shifted.digits == expand_element(ld, {1, 1}, 4).digits);  // xi * 1 = 1 + i

    TateDigits top;
    top.depth = 2;
    top.digits = {{0, 0}, {1, 0}};
    CHECK_THROWS_AS(xi_multiply(ld, top), DepthExhaustedError);
}

TEST_CASE("one minus xi is bijective on every finite level") {
    for (const LatticeData& ld : model_lattices()) {
        for (int nu = 1; nu <= 3; ++nu) {
            const BijectivityReport report = one_minus_xi_bijectivity(ld, nu);
            CHECK(report.bijective);
            CHECK(report.quotient_size == quotient_count(ld, nu));
        }
    }
}

TEST_CASE("dual basis pairs to 2 pi delta") {
    for (const LatticeData& ld : model_lattices()) {
        const DualBasis dual = dual_lattice(ld);
        const double two_pi = 2.0 * std::numbers::pi;
        CHECK(lattice_pairing(dual.omega1_star, ld.omega1) ==
              doctest::Approx(two_pi).epsilon(1e-12));
        CHECK(lattice_pairing(dual.omega1_star, ld.omega2) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(lattice_pairing(dual.omega2_star, ld.omega1) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(lattice_pairing(dual.omega2_star, ld.omega2) ==
              doctest::Approx(two_pi).epsilon(1e-12));
    }
}

TEST_CASE("dual index matches the primal quotient") {
    for (const LatticeData& ld : model_lattices()) {
        for (int nu = 0; nu <= 5; ++nu) {
            CHECK(dual_index(ld, nu) == quotient_count(ld, nu));
        }
    }
}

TEST_CASE("fixed points solve their defining equation") {
    for (const LatticeData& ld : model_lattices()) {
        for (const LatticePoint gamma : {LatticePoint{1, 0}, LatticePoint{0, 1}}) {
            for (int k : {1, 2, -1}) {
                const FixedPointReport report = solve_fixed_point(ld, gamma, k);
                CHECK(report.residual <= 1e-12);
                CHECK(report.leaf_jacobian > 0.0);
            }
        }
    }
    const FixedPointReport gauss = solve_fixed_point(gaussian_integer_lattice(), {1, 0}, 1);
    CHECK(gauss.leaf_jacobian == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fixed point counts equal the matching extension counts") {
    // Frozen: |det(I - X^k)| for the three models.
    CHECK(fixed_point_count(gaussian_integer_lattice(), 1) == BigInt(1));
    CHECK(fixed_point_count(gaussian_integer_lattice(), 2) == BigInt(5));
    CHECK(fixed_point_count(eisenstein_root_lattice(), 1) == BigInt(4));
    CHECK(fixed_point_count(eisenstein_root_lattice(), 2) == BigInt(16));
    CHECK(fixed_point_count(generic_cm_lattice(), 1) == BigInt(5));
    CHECK(fixed_point_count(generic_cm_lattice(), 2) == BigInt(35));

    for (const LatticeData& ld : model_lattices()) {
        const ZetaData zd = zeta_data_from_trace(ld.q(), ld.q(), ld.trace());
        for (int k = 1; k <= 4; ++k) {
            CHECK(fixed_point_count(ld, k) == extension_count(zd, k));
        }
        // Degree-weighted orbits resum to the period count.
        const auto census = closed_point_census(zd, 4);
        for (int k = 1; k <= 4; ++k) {
            BigInt total = 0;
            for (const auto& line : census.lines) {
                if (k % line.degree == 0) total += BigInt(line.degree) * line.orbit_count;
            }
            CHECK(total == fixed_point_count(ld, k));
        }
    }
}

TEST_CASE("orbit weights carry exact one-sided factors") {
    const LatticeData ld = gaussian_integer_lattice();
    const double logq = std::log(2.0);

    const OrbitWeightReport minus = orbit_weight_report(ld, 1, 2, FlowDirection::Minus);
    CHECK(minus.transversal_factor == Rational(1, 4));
    CHECK(minus.leaf_sign == 1);
    CHECK(minus.length == doctest::Approx(logq).epsilon(1e-14));
    CHECK(minus.delta_position == doctest::Approx(-2.0 * logq).epsilon(1e-14));
    CHECK(minus.coefficient == doctest::Approx(logq * 0.25).epsilon(1e-13));

    const OrbitWeightReport plus = orbit_weight_report(ld, 1, 2, FlowDirection::Plus);
    CHECK(plus.transversal_factor == Rational(1));
    CHECK(plus.delta_position == doctest::Approx(2.0 * logq).epsilon(1e-14));
    CHECK(plus.coefficient == doctest::Approx(logq).epsilon(1e-13));

    const OrbitWeightReport deep = orbit_weight_report(generic_cm_lattice(), 2, 1,
                                                       FlowDirection::Minus);
    CHECK(deep.transversal_factor == Rational(1, 25));
    CHECK(deep.length == doctest::Approx(2.0 * std::log(5.0)).epsilon(1e-13));
}

TEST_CASE("lattice JSON round trips") {
    for (const LatticeData& ld : model_lattices()) {
        const LatticeData back = parse_lattice_json(lattice_json(ld));
        CHECK(back.omega1 == ld.omega1);
        CHECK(back.omega2 == ld.omega2);
        CHECK(back.xi_matrix.a == ld.xi_matrix.a);
        CHECK(back.xi_matrix.b == ld.xi_matrix.b);
        CHECK(back.xi_matrix.c == ld.xi_matrix.c);
        CHECK(back.xi_matrix.d == ld.xi_matrix.d);
    }
    CHECK_THROWS_AS(parse_lattice_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_lattice_json("{\"omega1\":[1,0]}"), std::invalid_argument);
}

TEST_CASE("digit sets are pairwise incongruent mod xi") {
    for (const LatticeData& ld : model_lattices()) {
        const auto digits = digit_set(ld);
        CHECK(static_cast<int64_t>(digits.size()) == ld.q());
        CHECK(digits.front() == LatticePoint{0, 0});
        // Distinct digits expand to distinct depth-1 windows.
        std::set<std::vector<LatticePoint>> seen;
        for (const LatticePoint& digit : digits) {
            seen.insert(expand_element(ld, digit, 1).digits);
        }
        CHECK(seen.size() == digits.size());
    }
}
