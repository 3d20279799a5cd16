#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nehari/errors.hpp"
#include "nehari/grid.hpp"

namespace nehari {

// A Kirchhoff function (alpha or beta): C^2 on [0, inf) with coded value and
// first two derivatives.  linear_bound is the (M3) constant b with
// alpha'(s) <= b*s, when one exists.
struct KirchhoffSpec {
    std::string family = "custom";
    std::vector<double> params;
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    double linear_bound = 0.0;
};

// Built-in families:
//   quadratic {b}                     alpha(s) = b s^2 / 2
//   quadratic_plus_powers {b,a_i,g_i} alpha(s) = b s^2/2 + sum a_i s^{g_i}
//   log_integral {}                   alpha(s) = (1+s)ln(1+s) - s
//   zero {}                           alpha == 0 (pure Schroedinger limit)
inline KirchhoffSpec make_family(const std::string& tag, const std::vector<double>& params = {}) {
    KirchhoffSpec spec;
    spec.family = tag;
    spec.params = params;
    if (tag == "quadratic") {
        if (params.size() != 1 || !(params[0] > 0.0))
            throw invalid_family_error("quadratic family needs one parameter b > 0");
        const double b = params[0];
        spec.value = [b](double s) { return 0.5 * b * s * s; };
        spec.deriv = [b](double s) { return b * s; };
        spec.deriv2 = [b](double) { return b; };
        spec.linear_bound = b;
    } else if (tag == "quadratic_plus_powers") {
        // params: b, then (a_i, gamma_i) pairs
        if (params.size() < 3 || params.size() % 2 == 0 || !(params[0] > 0.0))
            throw invalid_family_error(
                "quadratic_plus_powers needs parameters b, a_1, gamma_1, ..., all with b > 0");
        const double b = params[0];
        std::vector<double> a, g;
        for (std::size_t i = 1; i + 1 < params.size(); i += 2) {
            if (!(params[i] > 0.0))
                throw invalid_family_error("quadratic_plus_powers: coefficients a_i must be > 0");
            if (!(params[i + 1] > 0.0 && params[i + 1] < 1.0))
                throw invalid_family_error("quadratic_plus_powers: exponents gamma_i must lie in (0,1)");
            a.push_back(params[i]);
            g.push_back(params[i + 1]);
        }
        spec.value = [b, a, g](double s) {
            double r = 0.5 * b * s * s;
            for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * std::pow(s, g[i]);
            return r;
        };
        spec.deriv = [b, a, g](double s) {
            double r = b * s;
            for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * g[i] * std::pow(s, g[i] - 1.0);
            return r;
        };
        spec.deriv2 = [b, a, g](double s) {
            double r = b;
            for (std::size_t i = 0; i < a.size(); ++i)
                r += a[i] * g[i] * (g[i] - 1.0) * std::pow(s, g[i] - 2.0);
            return r;
        };
        spec.linear_bound = b; // holds away from s = 0 only; validate_M reports the gap
    } else if (tag == "log_integral") {
        if (!params.empty()) throw invalid_family_error("log_integral takes no parameters");
        spec.value = [](double s) { return (1.0 + s) * std::log1p(s) - s; };
        spec.deriv = [](double s) { return std::log1p(s); };
        spec.deriv2 = [](double s) { return 1.0 / (1.0 + s); };
        spec.linear_bound = 1.0;
    } else if (tag == "zero") {
        if (!params.empty()) throw invalid_family_error("zero takes no parameters");
        spec.value = [](double) { return 0.0; };
        spec.deriv = [](double) { return 0.0; };
        spec.deriv2 = [](double) { return 0.0; };
        spec.linear_bound = 0.0;
    } else {
        throw invalid_family_error("unknown Kirchhoff family '" + tag + "'");
    }
    return spec;
}

// Potentials V1, V2 and coupling lambda sampled on the grid, together with
// the generating closures (kept for gradient-based diagnostics).
struct PotentialSet {
    ScalarField V1, V2, lambda;
    std::function<double(double, double, double)> V1_fn, V2_fn, lambda_fn;
    double delta = 0.0;
    std::array<int, 3> periods{1, 1, 1};

    PotentialSet() = default;
    PotentialSet(const Grid& grid, std::function<double(double, double, double)> v1,
                 std::function<double(double, double, double)> v2,
                 std::function<double(double, double, double)> lam, double delta_,
                 std::array<int, 3> periods_ = {1, 1, 1})
        : V1(sample(grid, v1)),
          V2(sample(grid, v2)),
          lambda(sample(grid, lam)),
          V1_fn(std::move(v1)),
          V2_fn(std::move(v2)),
          lambda_fn(std::move(lam)),
          delta(delta_),
          periods(periods_) {
        if (!(delta > 0.0))
            throw assumption_violation_error("PotentialSet: delta must be positive, per (V3)");
    }

    bool has_generators() const { return static_cast<bool>(V1_fn); }
};

// Full problem instance for the coupled Kirchhoff-Schroedinger system.
struct ProblemSpec {
    double a1 = 1.0, a2 = 1.0;
    KirchhoffSpec alpha, beta;
    PotentialSet potentials;
    double mu = 0.0;
    double p = 4.5, q = 4.5;
    Grid grid;

    ProblemSpec() = default;
    ProblemSpec(double a1_, double a2_, KirchhoffSpec alpha_, KirchhoffSpec beta_,
                PotentialSet pots, double mu_, double p_, double q_, const Grid& grid_)
        : a1(a1_), a2(a2_), alpha(std::move(alpha_)), beta(std::move(beta_)),
          potentials(std::move(pots)), mu(mu_), p(p_), q(q_), grid(grid_) {
        if (!(a1 > 0.0 && a2 > 0.0)) throw config_error("ProblemSpec: a1, a2 must be positive");
        if (!(mu >= 0.0)) throw config_error("ProblemSpec: mu must be >= 0");
        if (!(p > 4.0 && p <= q && q <= 6.0))
            throw config_error("ProblemSpec: exponents must satisfy 4 < p <= q <= 6 (got p=" +
                               std::to_string(p) + ", q=" + std::to_string(q) + ")");
        if (!(potentials.delta < std::min(a1, a2)))
            throw assumption_violation_error(
                "ProblemSpec: delta must satisfy delta < min{a1,a2}, per (V3)");
        if (!(potentials.V1.grid == grid))
            throw grid_mismatch_error("ProblemSpec: potentials sampled on a different grid");
    }
};

struct ValidationEntry {
    std::string hypothesis;
    bool pass = false;
    bool warning = false;
    std::string message;
    std::optional<std::array<double, 2>> counterexample; // (s, t) or (point value, -)
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const ValidationEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.hypothesis == name) return &e;
        return nullptr;
    }
};

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    return out;
}

} // namespace detail

// Samples hypotheses (M1)-(M4) on a log-spaced grid over [1e-6, 1e6].
// (M1) is accepted non-strictly with a warning flag, so the degenerate
// alpha' == 0 limit stays representable.
inline ValidationReport validate_M(const KirchhoffSpec& alpha, const KirchhoffSpec& beta,
                                   int samples = 512) {
    if (samples < 2) throw config_error("validate_M: samples must be >= 2");
    const auto ss = detail::log_spaced(1e-6, 1e6, samples);
    ValidationReport report;

    auto check_monotone = [&](const KirchhoffSpec& spec, const char* who) {
        ValidationEntry e;
        e.hypothesis = "M1";
        e.pass = true;
        bool strictly = true;
        for (std::size_t i = 1; i < ss.size(); ++i) {
            const double d0 = spec.deriv(ss[i - 1]), d1 = spec.deriv(ss[i]);
            if (d1 < d0 * (1.0 - 1e-12) - 1e-14) {
                e.pass = false;
                e.counterexample = {{ss[i - 1], ss[i]}};
                e.message = std::string(who) + "' decreases between sampled points";
                break;
            }
            if (!(d1 > d0)) strictly = false;
        }
        if (e.pass && !strictly) {
            e.warning = true;
            e.message = std::string(who) + "' is only non-strictly increasing";
        }
        return e;
    };
    {
        auto ea = check_monotone(alpha, "alpha");
        auto eb = check_monotone(beta, "beta");
        ValidationEntry e;
        e.hypothesis = "M1";
        e.pass = ea.pass && eb.pass;
        e.warning = ea.warning || eb.warning;
        e.message = !ea.pass ? ea.message : (!eb.pass ? eb.message : (ea.warning ? ea.message : eb.message));
        e.counterexample = !ea.pass ? ea.counterexample : eb.counterexample;
        report.entries.push_back(e);
    }

    // (M2): alpha'(s)/s and beta'(t)/t non-increasing.
    {
        ValidationEntry e;
        e.hypothesis = "M2";
        e.pass = true;
        for (const auto* spec : {&alpha, &beta}) {
            for (std::size_t i = 1; i < ss.size() && e.pass; ++i) {
                const double r0 = spec->deriv(ss[i - 1]) / ss[i - 1];
                const double r1 = spec->deriv(ss[i]) / ss[i];
                if (r1 > r0 * (1.0 + 1e-12) + 1e-14) {
                    e.pass = false;
                    e.counterexample = {{ss[i - 1], ss[i]}};
                    e.message = (spec == &alpha ? "alpha" : "beta") +
                                std::string("'(s)/s increases between sampled points");
                }
            }
            if (!e.pass) break;
        }
        report.entries.push_back(e);
    }

    // (M3): alpha'(s) <= b1 s, beta'(t) <= b2 t, plus the two-sided bracket
    // alpha'(s)s/2 + beta'(t)t/2 <= alpha(s)+beta(t) <= alpha'(s)s + beta'(t)t.
    {
        ValidationEntry e;
        e.hypothesis = "M3";
        e.pass = true;
        for (const auto* spec : {&alpha, &beta}) {
            for (double s : ss) {
                if (spec->deriv(s) > spec->linear_bound * s * (1.0 + 1e-9) + 1e-12) {
                    e.pass = false;
                    e.counterexample = {{s, spec->deriv(s)}};
                    e.message = (spec == &alpha ? "alpha" : "beta") +
                                std::string("'(s) exceeds its linear bound b*s at s=") +
                                std::to_string(s);
                    break;
                }
            }
            if (!e.pass) break;
        }
        if (e.pass) {
            // Coarser product grid keeps the bracket check quadratic-cheap.
            const auto coarse = detail::log_spaced(1e-6, 1e6, std::min(samples, 128));
            for (double s : coarse) {
                for (double t : coarse) {
                    const double lhs = 0.5 * alpha.deriv(s) * s + 0.5 * beta.deriv(t) * t;
                    const double mid = alpha.value(s) + beta.value(t);
                    const double rhs = alpha.deriv(s) * s + beta.deriv(t) * t;
                    const double tol = 1e-9 * (1.0 + std::abs(mid));
                    if (lhs > mid + tol || mid > rhs + tol) {
                        e.pass = false;
                        e.counterexample = {{s, t}};
                        e.message = "two-sided (M3) bracket fails at (s,t)=(" + std::to_string(s) +
                                    "," + std::to_string(t) + ")";
                        break;
                    }
                }
                if (!e.pass) break;
            }
        }
        report.entries.push_back(e);
    }

    // (M4): alpha''(s) s <= alpha'(s).
    {
        ValidationEntry e;
        e.hypothesis = "M4";
        e.pass = true;
        for (const auto* spec : {&alpha, &beta}) {
            for (double s : ss) {
                const double lhs = spec->deriv2(s) * s;
                const double rhs = spec->deriv(s);
                if (lhs > rhs + 1e-9 * (1.0 + std::abs(rhs))) {
                    e.pass = false;
                    e.counterexample = {{s, lhs - rhs}};
                    e.message = (spec == &alpha ? "alpha" : "beta") +
                                std::string("''(s)s > ") + (spec == &alpha ? "alpha" : "beta") +
                                "'(s) at s=" + std::to_string(s);
                    break;
                }
            }
            if (!e.pass) break;
        }
        report.entries.push_back(e);
    }
    return report;
}

// Pointwise checks of (V2), (V3), (V3') on the grid, plus the delta range and
// a random-Rayleigh-quotient probe of the (V2) infimum condition.
inline ValidationReport validate_V(const PotentialSet& pots, double a1, double a2,
                                   const Grid& grid) {
    ValidationReport report;
    const int n = grid.n;

    // (V1): sampled potentials and coupling are finite everywhere.
    {
        ValidationEntry e;
        e.hypothesis = "V1";
        e.pass = true;
        for (const auto* f : {&pots.V1, &pots.V2, &pots.lambda}) {
            for (double x : f->values)
                if (!std::isfinite(x)) {
                    e.pass = false;
                    e.message = "non-finite potential sample";
                    break;
                }
            if (!e.pass) break;
        }
        report.entries.push_back(e);
    }

    auto nonneg = [&](const ScalarField& V, const char* name) {
        ValidationEntry e;
        e.hypothesis = "V2";
        e.pass = true;
        for (int i = 0; i < n && e.pass; ++i)
            for (int j = 0; j < n && e.pass; ++j)
                for (int k = 0; k < n; ++k)
                    if (V(i, j, k) < 0.0) {
                        e.pass = false;
                        e.counterexample = {{grid.coordinate(i), V(i, j, k)}};
                        e.message = std::string(name) + " < 0 at x=" +
                                    std::to_string(grid.coordinate(i)) + ", y=" +
                                    std::to_string(grid.coordinate(j)) + ", z=" +
                                    std::to_string(grid.coordinate(k));
                        break;
                    }
        return e;
    };
    {
        auto e1 = nonneg(pots.V1, "V1");
        auto e2 = nonneg(pots.V2, "V2");
        ValidationEntry e;
        e.hypothesis = "V2";
        e.pass = e1.pass && e2.pass;
        e.message = !e1.pass ? e1.message : e2.message;
        e.counterexample = !e1.pass ? e1.counterexample : e2.counterexample;
        report.entries.push_back(e);
    }

    // (V2) infimum condition: smallest Rayleigh quotient of (-Delta + V_i)
    // over 20 random fields must stay positive.  A cheap necessary check.
    if (report.entries.back().pass) {
        ValidationEntry e;
        e.hypothesis = "V2-infimum";
        e.pass = true;
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> dist;
        for (const auto* V : {&pots.V1, &pots.V2}) {
            double best = std::numeric_limits<double>::infinity();
            for (int trial = 0; trial < 20; ++trial) {
                ScalarField f(grid);
                for (double& x : f.values) x = dist(rng);
                const double mass = integrate_product(f, f);
                best = std::min(best, weighted_norm_sq(f, *V) / mass);
            }
            if (!(best > 0.0)) {
                e.pass = false;
                e.message = "random Rayleigh quotient of (-Delta + V) is not positive";
            }
        }
        e.message = e.pass ? "min random Rayleigh quotient positive" : e.message;
        report.entries.push_back(e);
    }

    // delta range (0, min{a1,a2}).
    {
        ValidationEntry e;
        e.hypothesis = "V3-delta-range";
        e.pass = pots.delta > 0.0 && pots.delta < std::min(a1, a2);
        if (!e.pass)
            e.message = "delta=" + std::to_string(pots.delta) + " outside (0, min{a1,a2}=" +
                        std::to_string(std::min(a1, a2)) + ")";
        report.entries.push_back(e);
    }

    // (V3): |lambda| <= delta sqrt(V1 V2) pointwise.
    {
        ValidationEntry e;
        e.hypothesis = "V3";
        e.pass = true;
        for (int i = 0; i < n && e.pass; ++i)
            for (int j = 0; j < n && e.pass; ++j)
                for (int k = 0; k < n; ++k) {
                    const double bound =
                        pots.delta * std::sqrt(std::max(0.0, pots.V1(i, j, k) * pots.V2(i, j, k)));
                    const double lam = std::abs(pots.lambda(i, j, k));
                    if (lam > bound * (1.0 + 1e-12) + 1e-14) {
                        e.pass = false;
                        e.counterexample = {{grid.coordinate(i), lam - bound}};
                        e.message = "|lambda| > delta*sqrt(V1*V2) at x=" +
                                    std::to_string(grid.coordinate(i)) + ", y=" +
                                    std::to_string(grid.coordinate(j)) + ", z=" +
                                    std::to_string(grid.coordinate(k));
                        break;
                    }
                }
        report.entries.push_back(e);
    }

    // (V3'): lambda > 0 everywhere.  Informational; positivity upgrades the
    // ground state from nonnegative to positive.
    {
        ValidationEntry e;
        e.hypothesis = "V3'";
        e.pass = true;
        for (double lam : pots.lambda.values)
            if (!(lam > 0.0)) {
                e.warning = true;
                e.message = "lambda is not strictly positive everywhere";
                break;
            }
        report.entries.push_back(e);
    }
    return report;
}

// (V4)/(V5) checks with x measured from the box center.  Gradients come from
// central differences of the generator closures, so no wrap-around leakage.
inline ValidationReport validate_V45(const PotentialSet& pots, const Grid& grid) {
    if (!pots.has_generators())
        throw unsupported_check_error("validate_V45: potential generators unavailable");
    ValidationReport report;
    const int n = grid.n;
    const double fd = 1e-5 * std::max(1.0, grid.box_length);

    auto dot_grad_x = [&](const std::function<double(double, double, double)>& f, double x,
                          double y, double z) {
        const double gx = (f(x + fd, y, z) - f(x - fd, y, z)) / (2 * fd);
        const double gy = (f(x, y + fd, z) - f(x, y - fd, z)) / (2 * fd);
        const double gz = (f(x, y, z + fd) - f(x, y, z - fd)) / (2 * fd);
        return gx * x + gy * y + gz * z;
    };

    // (V4): 0 <= <grad V_i, x> <= C V_i, reporting the best empirical C.
    {
        ValidationEntry e;
        e.hypothesis = "V4";
        e.pass = true;
        double bestC = 0.0;
        for (const auto* f : {&pots.V1_fn, &pots.V2_fn}) {
            for (int i = 0; i < n && e.pass; ++i)
                for (int j = 0; j < n && e.pass; ++j)
                    for (int k = 0; k < n; ++k) {
                        const double x = grid.coordinate(i), y = grid.coordinate(j),
                                     z = grid.coordinate(k);
                        const double ip = dot_grad_x(*f, x, y, z);
                        const double V = (*f)(x, y, z);
                        if (ip < -1e-8 * (1.0 + std::abs(V))) {
                            e.pass = false;
                            e.counterexample = {{x, ip}};
                            e.message = "<grad V, x> < 0 at a grid point";
                            break;
                        }
                        if (V > 0.0) bestC = std::max(bestC, ip / V);
                        else if (ip > 1e-8) {
                            e.pass = false;
                            e.counterexample = {{x, ip}};
                            e.message = "<grad V, x> > 0 where V = 0, no finite C";
                            break;
                        }
                    }
            if (!e.pass) break;
        }
        if (e.pass) e.message = "best empirical C = " + std::to_string(bestC);
        report.entries.push_back(e);
    }

    // (V5): <grad lambda, x> <= 0.
    {
        ValidationEntry e;
        e.hypothesis = "V5";
        e.pass = true;
        for (int i = 0; i < n && e.pass; ++i)
            for (int j = 0; j < n && e.pass; ++j)
                for (int k = 0; k < n; ++k) {
                    const double x = grid.coordinate(i), y = grid.coordinate(j),
                                 z = grid.coordinate(k);
                    const double ip = dot_grad_x(pots.lambda_fn, x, y, z);
                    if (ip > 1e-8 * (1.0 + std::abs(pots.lambda_fn(x, y, z)))) {
                        e.pass = false;
                        e.counterexample = {{x, ip}};
                        e.message = "<grad lambda, x> > 0 at a grid point";
                        break;
                    }
                }
        report.entries.push_back(e);
    }
    return report;
}

} // namespace nehari
