#include "zetatrace/test_function.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace zetatrace;

TEST_CASE("weights vanish identically outside their support") {
    for (const auto kind :
         {TestFunctionKind::Bump, TestFunctionKind::GaussianTruncated, TestFunctionKind::Hat}) {
        const TestFunction alpha = make_test_function(kind, 1.5, 0.75, 2.0);
        CHECK(alpha(alpha.support_min()) == 0.0);
        CHECK(alpha(alpha.support_max()) == 0.0);
        CHECK(alpha(alpha.support_min() - 1e-12) == 0.0);
        CHECK(alpha(alpha.support_max() + 100.0) == 0.0);
        CHECK(alpha(1.5) > 0.0);
    }
}

TEST_CASE("center values follow the closed forms") {
    CHECK(make_test_function(TestFunctionKind::Bump, 0.0, 1.0, 3.0)(0.0) ==
          doctest::Approx(3.0 * std::exp(-1.0)).epsilon(1e-15));
    CHECK(make_test_function(TestFunctionKind::GaussianTruncated, 2.0, 1.0, 3.0)(2.0) == 3.0);
    CHECK(make_test_function(TestFunctionKind::Hat, -1.0, 0.5, 3.0)(-1.0) == 3.0);
    CHECK(make_test_function(TestFunctionKind::Hat, -1.0, 0.5, 3.0)(-0.75) == doctest::Approx(1.5));
}

TEST_CASE("weights are even about their center") {
    for (const auto kind :
         {TestFunctionKind::Bump, TestFunctionKind::GaussianTruncated, TestFunctionKind::Hat}) {
        const TestFunction alpha = make_test_function(kind, 0.75, 1.3, 1.0);
        for (double dx : {0.125, 0.375, 0.5, 0.75, 1.25}) {
            CHECK(alpha(0.75 + dx) == alpha(0.75 - dx));
        }
    }
}

TEST_CASE("bump decays smoothly into the support boundary") {
    const TestFunction alpha = make_test_function(TestFunctionKind::Bump, 0.0, 1.0, 1.0);
    CHECK(alpha(0.999) < 1e-200);
    CHECK(alpha(0.9) < alpha(0.5));
}

TEST_CASE("support radius takes the larger endpoint magnitude") {
    CHECK(make_test_function(TestFunctionKind::Bump, 2.0, 1.0, 1.0).support_radius() == 3.0);
    CHECK(make_test_function(TestFunctionKind::Bump, -2.0, 1.0, 1.0).support_radius() == 3.0);
    CHECK(make_test_function(TestFunctionKind::Bump, 0.0, 0.25, 1.0).support_radius() == 0.25);
}

TEST_CASE("textual forms parse with defaulted amplitude") {
    const TestFunction a = parse_test_function("bump:c=1.6,w=0.5");
    CHECK(a.kind == TestFunctionKind::Bump);
    CHECK(a.center == 1.6);
    CHECK(a.half_width == 0.5);
    CHECK(a.amplitude == 1.0);

    const TestFunction b = parse_test_function("hat:c=0,w=1,A=2");
    CHECK(b.kind == TestFunctionKind::Hat);
    CHECK(b.amplitude == 2.0);

    const TestFunction c = parse_test_function("gaussian_truncated:w=2");
    CHECK(c.kind == TestFunctionKind::GaussianTruncated);
    CHECK(c.center == 0.0);

    const TestFunction d = parse_test_function("gaussian:w=2");
    CHECK(d.kind == TestFunctionKind::GaussianTruncated);

    CHECK(parse_test_function("bump:c=-3.2,w=0.5,A=0").amplitude == 0.0);
}

TEST_CASE("malformed weight strings are rejected") {
    CHECK_THROWS_AS(parse_test_function("bump"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("bump:c=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("spike:w=1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("bump:w=0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("bump:w=-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("bump:w=1,z=3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_test_function("bump:w=abc"), std::invalid_argument);
    CHECK_THROWS_AS(make_test_function(TestFunctionKind::Bump, 0.0, 0.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("kind names round trip") {
    CHECK(test_function_name(TestFunctionKind::Bump) == "bump");
    CHECK(test_function_name(TestFunctionKind::GaussianTruncated) == "gaussian_truncated");
    CHECK(test_function_name(TestFunctionKind::Hat) == "hat");
}
