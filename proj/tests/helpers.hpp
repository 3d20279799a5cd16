#pragma once

// Shared instance presets and random-state generator for the test suite.

#include <random>

#include "nehari/model.hpp"

namespace testing_helpers {

using namespace nehari;

// Decoupled symmetric subcritical instance: a1=a2=1, V1=V2=1, lambda=0,
// quadratic Kirchhoff b=0.05, mu=1, p=q=4.5 on [-4,4)^3.
inline ProblemSpec decoupled_instance(int n = 16, double L = 8.0) {
    Grid g(n, L);
    PotentialSet pots(
        g, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.0; },
        0.5);
    return ProblemSpec(1.0, 1.0, make_family("quadratic", {0.05}),
                       make_family("quadratic", {0.05}), pots, 1.0, 4.5, 4.5, g);
}

// Coupled instance with a harmonic bump in V1 and constant coupling.
inline ProblemSpec coupled_instance(int n = 16, double L = 8.0) {
    Grid g(n, L);
    PotentialSet pots(
        g, [](double x, double y, double z) { return 1.0 + 0.1 * (x * x + y * y + z * z); },
        [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.3; },
        0.4);
    return ProblemSpec(1.0, 1.2, make_family("quadratic", {0.05}), make_family("log_integral"),
                       pots, 2.0, 4.6, 5.0, g);
}

// Critical-exponent instance (q = 6) used for the mu sweep.
inline ProblemSpec critical_instance(int n = 20, double L = 8.0, double mu = 1.0) {
    Grid g(n, L);
    PotentialSet pots(
        g, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.09; },
        0.1);
    return ProblemSpec(1.0, 1.0, make_family("quadratic", {0.01}),
                       make_family("quadratic", {0.01}), pots, mu, 5.5, 6.0, g);
}

// Doubly critical instance (p = q = 6) for the nonexistence regime.
inline ProblemSpec doubly_critical_instance(int n = 16, double L = 8.0) {
    Grid g(n, L);
    PotentialSet pots(
        g, [](double, double, double) { return 1.0; },
        [](double, double, double) { return 1.0; }, [](double, double, double) { return 0.45; },
        0.5);
    return ProblemSpec(1.0, 1.0, make_family("quadratic", {0.05}),
                       make_family("quadratic", {0.05}), pots, 1.0, 6.0, 6.0, g);
}

// Smooth random state: Gaussian samples tapered by a centered envelope so
// the field is nonzero but not pure grid noise.
inline StatePair random_state(const Grid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    auto mk = [&]() {
        ScalarField f(g);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k) {
                    const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
                    const double env =
                        std::exp(-(x * x + y * y + z * z) / (0.15 * g.box_length * g.box_length));
                    f(i, j, k) = env * dist(rng);
                }
        return f;
    };
    return StatePair(mk(), mk());
}

} // namespace testing_helpers
