#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nehari/energy.hpp"
#include "nehari/errors.hpp"
#include "nehari/grid.hpp"
#include "nehari/model.hpp"

namespace nehari {

// Sharp constant of D^{1,2}(R^3) -> L^6(R^3): S = 3 (pi/2)^{4/3}.
inline constexpr double sharp_sobolev_reference = 5.477904089531331;

struct SobolevEstimate {
    std::vector<double> quotients; // Rayleigh quotient per ladder rung
    std::vector<double> box_lengths;
    double estimate = 0.0;
    double error_bar = 0.0;
    double reference = sharp_sobolev_reference;
};

// Rayleigh quotient |grad U|_2^2 / |U|_6^2 of the Talenti bubble
// U(x) = (1 + |x|^2)^{-1/2} truncated to the periodic box, on a ladder of
// growing boxes at fixed spacing, then Richardson-extrapolated in 1/L.
// The bubble's slow spatial decay makes the finite-box quotient converge
// like 1/L, which the extrapolation removes.
inline SobolevEstimate sobolev_constant(
    const std::vector<std::pair<int, double>>& ladder = {{64, 16.0}, {96, 24.0}, {128, 32.0}}) {
    if (ladder.size() < 2)
        throw config_error("sobolev_constant: ladder needs at least two rungs");
    SobolevEstimate est;
    for (const auto& [n, L] : ladder) {
        Grid g(n, L);
        ScalarField u = sample(g, [](double x, double y, double z) {
            return 1.0 / std::sqrt(1.0 + x * x + y * y + z * z);
        });
        const double grad2 = grad_sq_integral(u);
        const double l6 = lp_norm(u, 6.0);
        est.quotients.push_back(grad2 / (l6 * l6));
        est.box_lengths.push_back(L);
    }
    // Two-point Richardson extrapolation assuming Q(L) = S - c/L on the last
    // pairs of rungs; the spread of consecutive extrapolants is the error bar.
    std::vector<double> extraps;
    for (std::size_t i = 0; i + 1 < est.quotients.size(); ++i) {
        const double L1 = est.box_lengths[i], L2 = est.box_lengths[i + 1];
        const double Q1 = est.quotients[i], Q2 = est.quotients[i + 1];
        extraps.push_back((Q2 / L1 - Q1 / L2) / (1.0 / L1 - 1.0 / L2));
    }
    est.estimate = extraps.back();
    est.error_bar = extraps.size() >= 2
                        ? std::abs(extraps.back() - extraps[extraps.size() - 2])
                        : std::abs(est.quotients.back() - est.estimate);
    return est;
}

// Critical level threshold of Proposition 4.1:
//   (1/4 - 1/p) [ (min{a1,a2} - delta) S ]^{3/2}.
inline double level_bound(double a1, double a2, double delta, double p, double sharp_constant) {
    if (!(a1 > 0.0 && a2 > 0.0)) throw config_error("level_bound: a1, a2 must be positive");
    if (!(p > 4.0 && p < 6.0))
        throw wrong_regime_error("level_bound: requires 4 < p < 6 (critical regime q = 6)");
    const double min_a = std::min(a1, a2);
    if (!(delta >= 0.0 && delta < min_a))
        throw config_error("level_bound: delta must lie in [0, min{a1,a2})");
    if (!(sharp_constant > 0.0)) throw config_error("level_bound: sharp constant must be positive");
    return (0.25 - 1.0 / p) * std::pow((min_a - delta) * sharp_constant, 1.5);
}

struct PohozaevTerm {
    std::string name;
    double value = 0.0;
};

struct PohozaevReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;      // |lhs - rhs| / max(|lhs|, |rhs|, 1)
    double boundary_mass = 0.0; // fraction of |state|^2 mass in the outer shell
    bool extended = false;      // true when the subcritical (p,q) weights were used
    std::vector<PohozaevTerm> term_table;
};

namespace detail {

// Gradients of the potential generators by central differences of the
// closures themselves; differencing the periodic samples instead would pick
// up the wrap-around jump of non-periodic generators like |x|^2.
inline std::array<double, 3> closure_gradient(const std::function<double(double, double, double)>& f,
                                              double x, double y, double z, double fd) {
    return {(f(x + fd, y, z) - f(x - fd, y, z)) / (2.0 * fd),
            (f(x, y + fd, z) - f(x, y - fd, z)) / (2.0 * fd),
            (f(x, y, z + fd) - f(x, y, z - fd)) / (2.0 * fd)};
}

} // namespace detail

// Residual of the Pohozaev identity (Lemma 6.1) on a computed pair.  At
// q = 6 (and p = 6) the paper's identity applies verbatim; for subcritical
// exponents the power terms carry weights 6/p and 6/q instead, and the
// report is flagged "extended".
inline PohozaevReport pohozaev_residual(const ProblemSpec& spec, const StatePair& state) {
    if (!(state.u.grid == spec.grid))
        throw grid_mismatch_error("pohozaev_residual: state grid differs from the problem grid");
    if (!spec.potentials.has_generators())
        throw unsupported_check_error(
            "pohozaev_residual: needs the potential generator closures to form <grad V, x>");

    const Grid& g = spec.grid;
    const double su = weighted_norm_sq(state.u, spec.potentials.V1);
    const double sv = weighted_norm_sq(state.v, spec.potentials.V2);
    const double cu = spec.a1 + spec.alpha.deriv(su);
    const double cv = spec.a2 + spec.beta.deriv(sv);
    const double fd = 1e-5 * std::max(1.0, g.box_length);

    const double grad_u = grad_sq_integral(state.u);
    const double grad_v = grad_sq_integral(state.v);

    double pot_u = 0.0, pot_v = 0.0;  // int V_i w^2
    double dpot = 0.0;                // int [c_u <grad V1, x> u^2 + c_v <grad V2, x> v^2]
    double dl_cross = 0.0;            // int <grad lambda, x> u v
    const double cell = g.cell_volume();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
                const std::size_t idx = g.index(i, j, k);
                const double u = state.u.values[idx], v = state.v.values[idx];
                pot_u += spec.potentials.V1.values[idx] * u * u;
                pot_v += spec.potentials.V2.values[idx] * v * v;
                const auto dV1 = detail::closure_gradient(spec.potentials.V1_fn, x, y, z, fd);
                const auto dV2 = detail::closure_gradient(spec.potentials.V2_fn, x, y, z, fd);
                const auto dl = detail::closure_gradient(spec.potentials.lambda_fn, x, y, z, fd);
                dpot += cu * (dV1[0] * x + dV1[1] * y + dV1[2] * z) * u * u +
                        cv * (dV2[0] * x + dV2[1] * y + dV2[2] * z) * v * v;
                dl_cross += (dl[0] * x + dl[1] * y + dl[2] * z) * u * v;
            }
    pot_u *= cell;
    pot_v *= cell;
    dpot *= cell;
    dl_cross *= cell;

    PohozaevReport rep;
    rep.extended = !(spec.p == 6.0 && spec.q == 6.0);
    const double wp = 6.0 / spec.p, wq = 6.0 / spec.q;
    const double pow_p = spec.mu * lp_norm_pow(state.u, spec.p);
    const double pow_q = lp_norm_pow(state.v, spec.q);
    const double cross = integrate_product(state.u, state.v, spec.potentials.lambda);

    rep.lhs = cu * (grad_u + 3.0 * pot_u) + cv * (grad_v + 3.0 * pot_v);
    rep.rhs = 2.0 * dl_cross - dpot + wp * pow_p + wq * pow_q + 6.0 * cross;
    rep.residual = std::abs(rep.lhs - rep.rhs) / std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1.0});

    // Mass fraction within one cell of the box faces: large values flag
    // truncation error, the usual culprit behind a fat residual.
    double shell = 0.0, total = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const std::size_t idx = g.index(i, j, k);
                const double m =
                    state.u.values[idx] * state.u.values[idx] + state.v.values[idx] * state.v.values[idx];
                total += m;
                const bool edge = i == 0 || i == g.n - 1 || j == 0 || j == g.n - 1 || k == 0 || k == g.n - 1;
                if (edge) shell += m;
            }
    rep.boundary_mass = total > 0.0 ? shell / total : 0.0;

    rep.term_table = {
        {"kirchhoff_coeff_u", cu},
        {"kirchhoff_coeff_v", cv},
        {"grad_sq_u", grad_u},
        {"grad_sq_v", grad_v},
        {"potential_u", pot_u},
        {"potential_v", pot_v},
        {"radial_potential_derivative", dpot},
        {"radial_coupling_derivative", dl_cross},
        {"power_p_weighted", wp * pow_p},
        {"power_q_weighted", wq * pow_q},
        {"coupling", 6.0 * cross},
    };
    return rep;
}

struct NonexistenceCertificate {
    double Q = 0.0;               // int [(a1+alpha')(V1)u^2 + (a2+beta')(V2)v^2 - 2 lambda u v]
    double pohozaev_bound = 0.0;  // what the Pohozaev identity forces Q to be at most
    double strict_lower = 0.0;    // delta-coercivity lower bound, positive for positive pairs
    std::string verdict;          // "contradiction" | "inconclusive"
    std::string detail;
};

// Theorem 1.3 mechanism at p = q = 6: a positive solution would force
//   Q <= int <grad lambda, x> u v - (1/2) int [c_u <grad V1,x> u^2 + c_v <grad V2,x> v^2]
// while the (V3) coercivity keeps Q strictly positive, so a strict gap
// certifies nonexistence on this discretization.
inline NonexistenceCertificate nonexistence_certificate(const ProblemSpec& spec,
                                                        const StatePair& state) {
    if (!(state.u.grid == spec.grid))
        throw grid_mismatch_error(
            "nonexistence_certificate: state grid differs from the problem grid");
    if (!(spec.p == 6.0 && spec.q == 6.0))
        throw wrong_regime_error("nonexistence_certificate: requires p = q = 6");
    if (!spec.potentials.has_generators())
        throw unsupported_check_error(
            "nonexistence_certificate: needs the potential generator closures");

    const Grid& g = spec.grid;
    const double su = weighted_norm_sq(state.u, spec.potentials.V1);
    const double sv = weighted_norm_sq(state.v, spec.potentials.V2);
    const double cu = spec.a1 + spec.alpha.deriv(su);
    const double cv = spec.a2 + spec.beta.deriv(sv);
    const double fd = 1e-5 * std::max(1.0, g.box_length);
    const double min_a = std::min(spec.a1, spec.a2);
    const double delta = spec.potentials.delta;

    double Q = 0.0, lower = 0.0, dpot = 0.0, dl_cross = 0.0;
    const double cell = g.cell_volume();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                const double x = g.coordinate(i), y = g.coordinate(j), z = g.coordinate(k);
                const std::size_t idx = g.index(i, j, k);
                const double u = state.u.values[idx], v = state.v.values[idx];
                const double V1 = spec.potentials.V1.values[idx];
                const double V2 = spec.potentials.V2.values[idx];
                const double lam = spec.potentials.lambda.values[idx];
                Q += cu * V1 * u * u + cv * V2 * v * v - 2.0 * lam * u * v;
                lower += spec.a1 * V1 * u * u + spec.a2 * V2 * v * v -
                         2.0 * (min_a / delta) * lam * u * v;
                const auto dV1 = detail::closure_gradient(spec.potentials.V1_fn, x, y, z, fd);
                const auto dV2 = detail::closure_gradient(spec.potentials.V2_fn, x, y, z, fd);
                const auto dl = detail::closure_gradient(spec.potentials.lambda_fn, x, y, z, fd);
                dpot += cu * (dV1[0] * x + dV1[1] * y + dV1[2] * z) * u * u +
                        cv * (dV2[0] * x + dV2[1] * y + dV2[2] * z) * v * v;
                dl_cross += (dl[0] * x + dl[1] * y + dl[2] * z) * u * v;
            }
    Q *= cell;
    lower *= cell;
    dpot *= cell;
    dl_cross *= cell;

    NonexistenceCertificate cert;
    cert.Q = Q;
    cert.pohozaev_bound = dl_cross - 0.5 * dpot;
    cert.strict_lower = lower;
    if (cert.strict_lower > cert.pohozaev_bound) {
        cert.verdict = "contradiction";
        cert.detail = "coercivity lower bound " + std::to_string(cert.strict_lower) +
                      " exceeds the Pohozaev ceiling " + std::to_string(cert.pohozaev_bound) +
                      ": no positive solution at p = q = 6";
    } else {
        cert.verdict = "inconclusive";
        cert.detail = "lower bound does not exceed the Pohozaev ceiling on this pair";
    }
    return cert;
}

} // namespace nehari
