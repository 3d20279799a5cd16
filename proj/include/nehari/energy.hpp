#pragma once

#include <cmath>
#include <string>

#include "nehari/errors.hpp"
#include "nehari/grid.hpp"
#include "nehari/model.hpp"

namespace nehari {

struct EnergyBreakdown {
    double quad = 0.0;      // (a1 ||u||^2 + a2 ||v||^2) / 2
    double kirchhoff = 0.0; // (alpha(||u||^2) + beta(||v||^2)) / 2
    double power_p = 0.0;   // mu/p ||u||_p^p
    double power_q = 0.0;   // 1/q ||v||_q^q
    double coupling = 0.0;  // int lambda u v
    double total = 0.0;
};

// Scalar reductions of a state; everything the fiber map needs.  Scaling the
// state by t scales norm_u_sq and norm_v_sq by t^2, cross by t^2, pow_p by
// t^p and pow_q by t^q, so the whole ray is resolved by scalar algebra.
struct FiberScalars {
    double norm_u_sq = 0.0; // ||u||_{E1}^2
    double norm_v_sq = 0.0; // ||v||_{E2}^2
    double cross = 0.0;     // int lambda u v
    double pow_p = 0.0;     // ||u||_p^p
    double pow_q = 0.0;     // ||v||_q^q
};

inline FiberScalars fiber_scalars(const ProblemSpec& spec, const StatePair& s) {
    if (!(s.u.grid == spec.grid))
        throw grid_mismatch_error("fiber_scalars: state does not live on the problem grid");
    FiberScalars m;
    m.norm_u_sq = weighted_norm_sq(s.u, spec.potentials.V1);
    m.norm_v_sq = weighted_norm_sq(s.v, spec.potentials.V2);
    ScalarField lam_u = s.u;
    for (std::size_t i = 0; i < lam_u.values.size(); ++i)
        lam_u.values[i] *= spec.potentials.lambda.values[i];
    m.cross = integrate_product(lam_u, s.v);
    m.pow_p = lp_norm_pow(s.u, spec.p);
    m.pow_q = lp_norm_pow(s.v, spec.q);
    return m;
}

inline double energy_at(const ProblemSpec& spec, const FiberScalars& m, double t) {
    const double su = t * t * m.norm_u_sq;
    const double sv = t * t * m.norm_v_sq;
    return 0.5 * (spec.a1 * su + spec.a2 * sv) +
           0.5 * (spec.alpha.value(su) + spec.beta.value(sv)) -
           spec.mu / spec.p * std::pow(t, spec.p) * m.pow_p -
           std::pow(t, spec.q) * m.pow_q / spec.q - t * t * m.cross;
}

// J(t s) = I'(ts)(ts); the Nehari functional along the ray.
inline double nehari_J_at(const ProblemSpec& spec, const FiberScalars& m, double t) {
    const double su = t * t * m.norm_u_sq;
    const double sv = t * t * m.norm_v_sq;
    return spec.a1 * su + spec.a2 * sv + spec.alpha.deriv(su) * su + spec.beta.deriv(sv) * sv -
           2.0 * t * t * m.cross - spec.mu * std::pow(t, spec.p) * m.pow_p -
           std::pow(t, spec.q) * m.pow_q;
}

// Magnitude scale of the terms in identity (2.2), for relative residuals.
inline double nehari_scale_at(const ProblemSpec& spec, const FiberScalars& m, double t) {
    const double su = t * t * m.norm_u_sq;
    const double sv = t * t * m.norm_v_sq;
    return std::abs(spec.a1 * su) + std::abs(spec.a2 * sv) + std::abs(spec.alpha.deriv(su) * su) +
           std::abs(spec.beta.deriv(sv) * sv) + std::abs(2.0 * t * t * m.cross) +
           std::abs(spec.mu * std::pow(t, spec.p) * m.pow_p) + std::abs(std::pow(t, spec.q) * m.pow_q);
}

// d/dt of J(t s), for Newton acceleration of the fiber root.
inline double nehari_J_deriv_at(const ProblemSpec& spec, const FiberScalars& m, double t) {
    const double su = t * t * m.norm_u_sq;
    const double sv = t * t * m.norm_v_sq;
    const double dsu = 2.0 * t * m.norm_u_sq;
    const double dsv = 2.0 * t * m.norm_v_sq;
    return spec.a1 * dsu + spec.a2 * dsv + spec.alpha.deriv2(su) * dsu * su +
           spec.alpha.deriv(su) * dsu + spec.beta.deriv2(sv) * dsv * sv +
           spec.beta.deriv(sv) * dsv - 4.0 * t * m.cross -
           spec.mu * spec.p * std::pow(t, spec.p - 1.0) * m.pow_p -
           spec.q * std::pow(t, spec.q - 1.0) * m.pow_q;
}

inline EnergyBreakdown energy(const ProblemSpec& spec, const StatePair& s) {
    const FiberScalars m = fiber_scalars(spec, s);
    EnergyBreakdown b;
    b.quad = 0.5 * (spec.a1 * m.norm_u_sq + spec.a2 * m.norm_v_sq);
    b.kirchhoff = 0.5 * (spec.alpha.value(m.norm_u_sq) + spec.beta.value(m.norm_v_sq));
    b.power_p = spec.mu / spec.p * m.pow_p;
    b.power_q = m.pow_q / spec.q;
    b.coupling = m.cross;
    b.total = b.quad + b.kirchhoff - b.power_p - b.power_q - b.coupling;
    return b;
}

namespace detail {

// sign(u) |u|^{r-1}, extended by 0 at u = 0 (continuous since r > 4).
inline double signed_power(double u, double r) {
    if (u == 0.0) return 0.0;
    return (u > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(u), r - 1.0);
}

} // namespace detail

// Exact gradient of the discrete energy, represented so that
// <grad I(s), d> = integrate(G_u d_u) + integrate(G_v d_v).
inline StatePair energy_gradient(const ProblemSpec& spec, const StatePair& s) {
    if (!(s.u.grid == spec.grid))
        throw grid_mismatch_error("energy_gradient: state does not live on the problem grid");
    const double su = weighted_norm_sq(s.u, spec.potentials.V1);
    const double sv = weighted_norm_sq(s.v, spec.potentials.V2);
    const double cu = spec.a1 + spec.alpha.deriv(su);
    const double cv = spec.a2 + spec.beta.deriv(sv);

    ScalarField Gu = laplacian(s.u);
    ScalarField Gv = laplacian(s.v);
    const auto& V1 = spec.potentials.V1.values;
    const auto& V2 = spec.potentials.V2.values;
    const auto& lam = spec.potentials.lambda.values;
    for (std::size_t i = 0; i < Gu.values.size(); ++i) {
        const double u = s.u.values[i];
        const double v = s.v.values[i];
        Gu.values[i] = cu * (-Gu.values[i] + V1[i] * u) -
                       spec.mu * detail::signed_power(u, spec.p) - lam[i] * v;
        Gv.values[i] = cv * (-Gv.values[i] + V2[i] * v) -
                       detail::signed_power(v, spec.q) - lam[i] * u;
    }
    return StatePair(std::move(Gu), std::move(Gv));
}

inline bool is_zero_state(const StatePair& s) {
    return max_abs(s.u) == 0.0 && max_abs(s.v) == 0.0;
}

// J(u,v) = I'(u,v)(u,v); zero exactly on the Nehari manifold.
inline double nehari_J(const ProblemSpec& spec, const StatePair& s) {
    if (is_zero_state(s))
        throw undefined_on_origin_error("nehari_J: the Nehari manifold excludes (0,0)");
    return nehari_J_at(spec, fiber_scalars(spec, s), 1.0);
}

// Fiber map g(t) = I(tu, tv) and its derivative g'(t) = J(ts)/t.
struct FiberPoint {
    double g = 0.0;
    double gprime = 0.0;
};

inline FiberPoint fiber(const ProblemSpec& spec, const StatePair& s, double t) {
    if (!(t > 0.0)) throw error("fiber: t must be positive");
    if (is_zero_state(s)) throw undefined_on_origin_error("fiber: state is identically zero");
    const FiberScalars m = fiber_scalars(spec, s);
    return {energy_at(spec, m, t), nehari_J_at(spec, m, t) / t};
}

struct NehariProjection {
    double t0 = 0.0;
    StatePair projected;
    double g_at_t0 = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
};

namespace detail {

// Root of t -> J(t s) by bracketing from t = 1 and bisection with Newton
// acceleration.  Lemma 2.3's monotone split guarantees a single sign change,
// so bisection is globally safe; Newton only sharpens the rate.
struct FiberRoot {
    double t0, lo, hi;
    int iterations;
};

inline FiberRoot fiber_root(const ProblemSpec& spec, const FiberScalars& m) {
    double lo = 1.0, hi = 1.0;
    int iters = 0;
    while (nehari_J_at(spec, m, lo) <= 0.0) {
        lo *= 0.5;
        ++iters;
        if (lo < 1e-12)
            throw projection_failure_error(
                "nehari_project: no positive fiber value found down to t = 1e-12");
    }
    while (nehari_J_at(spec, m, hi) >= 0.0) {
        hi *= 2.0;
        ++iters;
        if (hi > 1e12)
            throw projection_failure_error(
                "nehari_project: no sign change found up to t = 1e12 "
                "(critical-case degeneracy or assumption violation)");
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 400; ++iter) {
        ++iters;
        double tn;
        if (iter % 2 == 0) {
            // Newton step, discarded when it leaves the bracket.
            const double J = nehari_J_at(spec, m, t);
            const double Jp = nehari_J_deriv_at(spec, m, t);
            tn = (Jp != 0.0) ? t - J / Jp : -1.0;
            if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        } else {
            // Strict bisection on alternate steps keeps the bracket shrinking.
            tn = 0.5 * (lo + hi);
        }
        const double Jn = nehari_J_at(spec, m, tn);
        if (Jn > 0.0)
            lo = tn;
        else
            hi = tn;
        t = tn;
        if (hi - lo <= 1e-12 * t) break;
    }
    // Plateau in g' (non-strict M1) resolves to the bracket midpoint.
    return {0.5 * (lo + hi), lo, hi, iters};
}

} // namespace detail

// Unique positive fiber maximum t0 with (t0 u, t0 v) on the Nehari manifold.
inline NehariProjection nehari_project(const ProblemSpec& spec, const StatePair& s) {
    if (is_zero_state(s))
        throw undefined_on_origin_error("nehari_project: cannot project the zero state");
    const FiberScalars m = fiber_scalars(spec, s);
    const auto root = detail::fiber_root(spec, m);

    NehariProjection proj;
    proj.t0 = root.t0;
    proj.bracket_lo = root.lo;
    proj.bracket_hi = root.hi;
    proj.iterations = root.iterations;
    proj.projected = StatePair(scaled(s.u, root.t0), scaled(s.v, root.t0));
    proj.g_at_t0 = energy_at(spec, m, root.t0);

    const double residual = std::abs(nehari_J_at(spec, m, root.t0));
    const double scale = nehari_scale_at(spec, m, root.t0);
    if (residual > 1e-9 * scale)
        throw projection_failure_error("nehari_project: |J| residual " + std::to_string(residual) +
                                       " exceeds 1e-9 of term scale " + std::to_string(scale));
    return proj;
}

} // namespace nehari
