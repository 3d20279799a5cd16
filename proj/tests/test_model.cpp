#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "nehari/model.hpp"

using namespace nehari;

TEST_CASE("built-in Kirchhoff families") {
    auto quad = make_family("quadratic", {0.5});
    CHECK(quad.value(4.0) == doctest::Approx(4.0));
    CHECK(quad.deriv(4.0) == doctest::Approx(2.0));
    CHECK(quad.deriv2(4.0) == doctest::Approx(0.5));

    auto li = make_family("log_integral");
    CHECK(li.value(0.0) == doctest::Approx(0.0));
    CHECK(li.deriv(std::exp(1.0) - 1.0) == doctest::Approx(1.0));
    CHECK(li.deriv2(1.0) == doctest::Approx(0.5));

    auto zero = make_family("zero");
    CHECK(zero.value(7.0) == 0.0);

    CHECK_THROWS_AS(make_family("quadratic", {}), invalid_family_error);
    CHECK_THROWS_AS(make_family("quadratic", {-1.0}), invalid_family_error);
    CHECK_THROWS_AS(make_family("quadratic_plus_powers", {1.0, 0.5, 1.5}), invalid_family_error);
    CHECK_THROWS_AS(make_family("cubic"), invalid_family_error);
}

TEST_CASE("hypothesis sampling on the built-in families") {
    auto quad = make_family("quadratic", {0.05});
    auto rep = validate_M(quad, quad);
    CHECK(rep.all_passed());
    CHECK_FALSE(rep.find("M1")->warning);

    auto li = make_family("log_integral");
    CHECK(validate_M(li, li).all_passed());

    // Degenerate limit: alpha' == 0 is only non-strictly increasing.
    auto zero = make_family("zero");
    auto zrep = validate_M(zero, zero);
    CHECK(zrep.all_passed());
    CHECK(zrep.find("M1")->warning);

    // The concave power add-on makes alpha' blow up (decreasing) near 0, so
    // the monotonicity and linear-bound samples fail there.
    auto qpp = make_family("quadratic_plus_powers", {0.05, 0.1, 0.5});
    auto prep = validate_M(qpp, qpp);
    CHECK_FALSE(prep.all_passed());
    CHECK_FALSE(prep.find("M1")->pass);
}

TEST_CASE("potential checks") {
    Grid g(8, 4.0);

    SUBCASE("compliant constants pass") {
        PotentialSet pots(
            g, [](double, double, double) { return 1.0; },
            [](double, double, double) { return 1.0; },
            [](double, double, double) { return 0.09; }, 0.1);
        auto rep = validate_V(pots, 1.0, 1.0, g);
        CHECK(rep.all_passed());
        CHECK(rep.find("V3'")->pass);
    }

    SUBCASE("coupling above the delta envelope fails (V3)") {
        PotentialSet pots(
            g, [](double, double, double) { return 1.0; },
            [](double, double, double) { return 1.0; },
            [](double, double, double) { return 0.2; }, 0.1);
        auto rep = validate_V(pots, 1.0, 1.0, g);
        CHECK_FALSE(rep.find("V3")->pass);
    }

    SUBCASE("zero coupling is a warning, not a failure") {
        PotentialSet pots(
            g, [](double, double, double) { return 1.0; },
            [](double, double, double) { return 1.0; },
            [](double, double, double) { return 0.0; }, 0.1);
        auto rep = validate_V(pots, 1.0, 1.0, g);
        CHECK(rep.all_passed());
        CHECK(rep.find("V3'")->warning);
    }
}

TEST_CASE("radial conditions on the generators") {
    Grid g(8, 4.0);

    SUBCASE("constant potentials: both inner products vanish") {
        PotentialSet pots(
            g, [](double, double, double) { return 1.0; },
            [](double, double, double) { return 1.0; },
            [](double, double, double) { return 0.09; }, 0.1);
        auto rep = validate_V45(pots, g);
        CHECK(rep.all_passed());
    }

    SUBCASE("radially increasing V passes (V4), growing lambda fails (V5)") {
        PotentialSet pots(
            g, [](double x, double y, double z) { return 1.0 + 0.1 * (x * x + y * y + z * z); },
            [](double, double, double) { return 1.0; },
            [](double x, double y, double z) { return 0.01 * (x * x + y * y + z * z); }, 0.9);
        auto rep = validate_V45(pots, g);
        CHECK(rep.find("V4")->pass);
        CHECK_FALSE(rep.find("V5")->pass);
    }
}

TEST_CASE("problem spec validation") {
    Grid g(8, 4.0);
    PotentialSet pots(
        g, [](double, double, double) { return 1.0; }, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 0.0; }, 0.5);
    auto quad = make_family("quadratic", {0.05});

    CHECK_THROWS_AS(ProblemSpec(1, 1, quad, quad, pots, 1.0, 3.0, 4.5, g), config_error);
    CHECK_THROWS_AS(ProblemSpec(1, 1, quad, quad, pots, 1.0, 5.0, 4.5, g), config_error);
    CHECK_THROWS_AS(ProblemSpec(1, 1, quad, quad, pots, 1.0, 4.5, 6.5, g), config_error);
    CHECK_THROWS_AS(ProblemSpec(1, 1, quad, quad, pots, -1.0, 4.5, 4.5, g), config_error);
    // delta must stay below min{a1,a2}
    CHECK_THROWS_AS(ProblemSpec(0.4, 1, quad, quad, pots, 1.0, 4.5, 4.5, g),
                    assumption_violation_error);
    CHECK_NOTHROW(testing_helpers::decoupled_instance(8, 4.0));
}
