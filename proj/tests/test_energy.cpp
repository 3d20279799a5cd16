#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "nehari/energy.hpp"

using namespace nehari;
using testing_helpers::coupled_instance;
using testing_helpers::decoupled_instance;
using testing_helpers::random_state;

TEST_CASE("energy breakdown sums to the total") {
    ProblemSpec spec = coupled_instance(8);
    std::mt19937_64 rng(7);
    StatePair s = random_state(spec.grid, rng);
    EnergyBreakdown e = energy(spec, s);
    CHECK(e.total ==
          doctest::Approx(e.quad + e.kirchhoff - e.power_p - e.power_q - e.coupling).epsilon(1e-14));
}

TEST_CASE("ray algebra matches direct evaluation") {
    ProblemSpec spec = coupled_instance(8);
    std::mt19937_64 rng(11);
    StatePair s = random_state(spec.grid, rng);
    FiberScalars m = fiber_scalars(spec, s);
    for (double t : {0.3, 1.0, 2.7}) {
        StatePair ts(scaled(s.u, t), scaled(s.v, t));
        CHECK(energy_at(spec, m, t) == doctest::Approx(energy(spec, ts).total).epsilon(1e-12));
        CHECK(nehari_J_at(spec, m, t) == doctest::Approx(nehari_J(spec, ts)).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches central differences") {
    ProblemSpec spec = coupled_instance(8);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        StatePair s = random_state(spec.grid, rng);
        StatePair d = random_state(spec.grid, rng);
        StatePair grad = energy_gradient(spec, s);
        // L2 pairing of the gradient representation with the direction
        const double gd = integrate_product(grad.u, d.u) + integrate_product(grad.v, d.v);
        const double h = 1e-5;
        StatePair plus = s, minus = s;
        axpy(plus.u, h, d.u);
        axpy(plus.v, h, d.v);
        axpy(minus.u, -h, d.u);
        axpy(minus.v, -h, d.v);
        const double fd = (energy(spec, plus).total - energy(spec, minus).total) / (2.0 * h);
        CHECK(gd == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("fiber map: g'(1) is the Nehari functional") {
    ProblemSpec spec = decoupled_instance(8);
    std::mt19937_64 rng(3);
    StatePair s = random_state(spec.grid, rng);
    FiberPoint fp = fiber(spec, s, 1.0);
    CHECK(fp.gprime == doctest::Approx(nehari_J(spec, s)).epsilon(1e-12));
    CHECK(fp.g == doctest::Approx(energy(spec, s).total).epsilon(1e-12));
    CHECK_THROWS(fiber(spec, s, 0.0));
}

TEST_CASE("projection lands on the manifold") {
    ProblemSpec spec = coupled_instance(8);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        StatePair s = random_state(spec.grid, rng);
        NehariProjection proj = nehari_project(spec, s);
        CHECK(proj.t0 > 0.0);
        const FiberScalars m = fiber_scalars(spec, proj.projected);
        const double rel = std::abs(nehari_J_at(spec, m, 1.0)) / nehari_scale_at(spec, m, 1.0);
        CHECK(rel <= 1e-8);
        // projected point is the fiber maximum: g' changes sign across t0
        CHECK(fiber(spec, s, proj.t0 * 0.5).gprime > 0.0);
        CHECK(fiber(spec, s, proj.t0 * 2.0).gprime < 0.0);
    }
}

TEST_CASE("projection is ray invariant") {
    ProblemSpec spec = coupled_instance(8);
    std::mt19937_64 rng(9);
    StatePair s = random_state(spec.grid, rng);
    NehariProjection base = nehari_project(spec, s);
    for (double c : {0.1, 3.0, 40.0}) {
        StatePair cs(scaled(s.u, c), scaled(s.v, c));
        NehariProjection proj = nehari_project(spec, cs);
        CHECK(proj.t0 * c == doctest::Approx(base.t0).epsilon(1e-9));
        for (std::size_t i = 0; i < s.u.values.size(); ++i) {
            CHECK(proj.projected.u.values[i] == doctest::Approx(base.projected.u.values[i]).epsilon(1e-8));
            CHECK(proj.projected.v.values[i] == doctest::Approx(base.projected.v.values[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("zero state handling") {
    ProblemSpec spec = decoupled_instance(8);
    StatePair zero(ScalarField(spec.grid), ScalarField(spec.grid));
    CHECK(is_zero_state(zero));
    CHECK_THROWS_AS(nehari_J(spec, zero), undefined_on_origin_error);
    CHECK_THROWS_AS(nehari_project(spec, zero), undefined_on_origin_error);
    CHECK(energy(spec, zero).total == 0.0);
}
