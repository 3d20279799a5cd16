#include <cmath>
#include <numbers>

#include <doctest.h>

#include "nehari/errors.hpp"
#include "nehari/expr.hpp"

using namespace nehari;

TEST_CASE("arithmetic and precedence") {
    CHECK(compile_expression("2+3*4")(0, 0, 0) == doctest::Approx(14.0));
    CHECK(compile_expression("(2+3)*4")(0, 0, 0) == doctest::Approx(20.0));
    CHECK(compile_expression("2^3^2")(0, 0, 0) == doctest::Approx(512.0)); // right-assoc
    CHECK(compile_expression("-x^2")(3, 0, 0) == doctest::Approx(-9.0));
    CHECK(compile_expression("7/2/2")(0, 0, 0) == doctest::Approx(1.75));
    CHECK(compile_expression("1e-2 + 2.5e1")(0, 0, 0) == doctest::Approx(25.01));
}

TEST_CASE("variables and constants") {
    auto f = compile_expression("x*y + z");
    CHECK(f(2, 3, 4) == doctest::Approx(10.0));
    CHECK(compile_expression("pi")(0, 0, 0) == doctest::Approx(std::numbers::pi));
    CHECK(compile_expression("sin(pi/2) + cos(0)")(0, 0, 0) == doctest::Approx(2.0));
    CHECK(compile_expression("exp(1)")(0, 0, 0) == doctest::Approx(std::exp(1.0)));
    CHECK(compile_expression("sqrt(abs(-9))")(0, 0, 0) == doctest::Approx(3.0));
}

TEST_CASE("typical potential expressions") {
    auto V = compile_expression("1 + 0.5*(x^2 + y^2 + z^2)");
    CHECK(V(1, 1, 1) == doctest::Approx(2.5));
    auto lam = compile_expression("0.09");
    CHECK(lam(-3, 2, 7) == doctest::Approx(0.09));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(compile_expression("2 +"), config_error);
    CHECK_THROWS_AS(compile_expression("foo(x)"), config_error);
    CHECK_THROWS_AS(compile_expression("2 * * 3"), config_error);
    CHECK_THROWS_AS(compile_expression("(1 + 2"), config_error);
    CHECK_THROWS_AS(compile_expression(""), config_error);
}
