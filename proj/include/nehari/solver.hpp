#pragma once

#include <chrono>
#include <cmath>
#include <future>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nehari/energy.hpp"
#include "nehari/errors.hpp"
#include "nehari/grid.hpp"
#include "nehari/model.hpp"

namespace nehari {

struct SolverConfig {
    int max_iters = 2000;
    double grad_tol = 1e-7;        // stop when ||grad I||_E / max(1, ||state||_E) <= grad_tol
    double step0 = 0.1;
    double backtrack_shrink = 0.5;
    int backtrack_max_halvings = 40;
    std::uint64_t seed = 1;
    std::string init = "gaussian_bump"; // gaussian_bump | random_smooth | file
    std::string init_u_path, init_v_path;

    void validate() const {
        if (max_iters < 1) throw config_error("SolverConfig: max_iters must be >= 1");
        if (!(grad_tol > 0.0)) throw config_error("SolverConfig: grad_tol must be positive");
        if (!(step0 > 0.0)) throw config_error("SolverConfig: step0 must be positive");
        if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0))
            throw config_error("SolverConfig: backtrack shrink factor must lie in (0,1)");
        if (backtrack_max_halvings < 1)
            throw config_error("SolverConfig: backtrack max halvings must be >= 1");
    }
};

struct TraceEntry {
    int iter = 0;
    double energy = 0.0;
    double grad_norm_rel = 0.0;
    double t0 = 0.0;
    double step = 0.0;
    double state_norm_sq = 0.0; // ||(u,v)||_E^2, for the boundedness diagnostic
};

struct SolveReport {
    StatePair state;
    double c_N_estimate = 0.0;
    double grad_norm_rel = 0.0;
    int iterations = 0;
    std::vector<TraceEntry> energy_trace;
    bool converged = false;
    bool sign_normalized = false;
    std::string stall_reason; // empty when converged
    double nehari_residual_rel = 0.0;
    double wall_time_s = 0.0;
};

namespace detail {

inline StatePair initial_state(const ProblemSpec& spec, const SolverConfig& cfg) {
    const Grid& g = spec.grid;
    if (cfg.init == "gaussian_bump") {
        // Positive Gaussians of width L/8 at the box center bias the descent
        // toward the positive ground state.
        const double w = g.box_length / 8.0;
        ScalarField f = sample(g, [w](double x, double y, double z) {
            return std::exp(-(x * x + y * y + z * z) / (2.0 * w * w));
        });
        return StatePair(f, f);
    }
    if (cfg.init == "random_smooth") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> dist;
        auto smooth_noise = [&]() {
            ScalarField f(g);
            for (double& x : f.values) x = dist(rng);
            // A few Jacobi averaging sweeps leave a smooth random profile.
            for (int sweep = 0; sweep < 10; ++sweep) {
                ScalarField lap = laplacian(f);
                const double h2 = g.spacing() * g.spacing();
                for (std::size_t i = 0; i < f.values.size(); ++i)
                    f.values[i] += (h2 / 12.0) * lap.values[i];
            }
            return f;
        };
        return StatePair(smooth_noise(), smooth_noise());
    }
    throw config_error("SolverConfig: unknown init scheme '" + cfg.init + "'");
}

inline double state_norm_sq(const ProblemSpec& spec, const StatePair& s) {
    return weighted_norm_sq(s.u, spec.potentials.V1) + weighted_norm_sq(s.v, spec.potentials.V2);
}

} // namespace detail

// Nehari projection of (|u|, |v|).  Its energy never exceeds the fiber
// maximum of the input's ray when the coupling is nonnegative (the
// sign-normalization step of Theorem 1.1).
inline StatePair sign_normalize(const ProblemSpec& spec, const StatePair& s) {
    const double energy_before = energy(spec, nehari_project(spec, s).projected).total;
    StatePair abs_state(abs_field(s.u), abs_field(s.v));
    NehariProjection proj = nehari_project(spec, abs_state);
    bool lambda_nonneg = true;
    for (double lam : spec.potentials.lambda.values)
        if (lam < 0.0) {
            lambda_nonneg = false;
            break;
        }
    if (lambda_nonneg) {
        const double energy_after = energy(spec, proj.projected).total;
        if (energy_after > energy_before + 1e-10 * (1.0 + std::abs(energy_before)))
            throw error("sign_normalize: energy increased under nonnegative coupling (" +
                        std::to_string(energy_after) + " > " + std::to_string(energy_before) + ")");
    }
    return proj.projected;
}

// Ground-state search: steepest descent in the flat E-metric with Nehari
// reprojection after every step and Armijo-style backtracking on the
// projected energy.
inline SolveReport solve_ground_state(const ProblemSpec& spec, const SolverConfig& cfg,
                                      std::optional<StatePair> initial = std::nullopt) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    StatePair raw = initial ? *initial : detail::initial_state(spec, cfg);
    NehariProjection proj = nehari_project(spec, raw);
    StatePair state = proj.projected;
    double E = energy(spec, state).total;
    double t0 = proj.t0;

    SolveReport report;
    report.energy_trace.reserve(cfg.max_iters);

    double step = cfg.step0;
    double grad_rel = 0.0;
    bool converged = false;
    std::string stall_reason;
    int iter = 0;

    for (iter = 1; iter <= cfg.max_iters; ++iter) {
        StatePair grad = energy_gradient(spec, state);
        const double gnorm = std::sqrt(detail::state_norm_sq(spec, grad));
        const double snorm = std::sqrt(detail::state_norm_sq(spec, state));
        grad_rel = gnorm / std::max(1.0, snorm);
        report.energy_trace.push_back({iter, E, grad_rel, t0, step, snorm * snorm});
        if (grad_rel <= cfg.grad_tol) {
            converged = true;
            break;
        }

        bool accepted = false;
        for (int halving = 0; halving < cfg.backtrack_max_halvings; ++halving) {
            StatePair candidate = state;
            axpy(candidate.u, -step, grad.u);
            axpy(candidate.v, -step, grad.v);
            NehariProjection cand_proj;
            try {
                cand_proj = nehari_project(spec, candidate);
            } catch (const projection_failure_error&) {
                step *= cfg.backtrack_shrink;
                continue;
            } catch (const undefined_on_origin_error&) {
                step *= cfg.backtrack_shrink;
                continue;
            }
            const double E_new = energy(spec, cand_proj.projected).total;
            if (E_new <= E + 1e-14 * std::abs(E)) {
                state = std::move(cand_proj.projected);
                E = E_new;
                t0 = cand_proj.t0;
                accepted = true;
                break;
            }
            step *= cfg.backtrack_shrink;
        }
        if (!accepted) {
            stall_reason = "step-size collapse after " + std::to_string(cfg.backtrack_max_halvings) +
                           " halvings at iteration " + std::to_string(iter);
            break;
        }
        // Cautious growth keeps the step near the largest accepted size.
        step = std::min(step * 1.5, 1e6 * cfg.step0);
    }
    if (!converged && stall_reason.empty())
        stall_reason = "gradient tolerance not reached within max_iters";

    // Sign normalization (Theorem 1.1 mechanism) when the coupling allows it.
    bool lambda_nonneg = true;
    for (double lam : spec.potentials.lambda.values)
        if (lam < 0.0) {
            lambda_nonneg = false;
            break;
        }
    if (lambda_nonneg && !is_zero_state(state)) {
        try {
            StatePair normalized = sign_normalize(spec, state);
            const double E_norm = energy(spec, normalized).total;
            if (E_norm <= E + 1e-10 * (1.0 + std::abs(E))) {
                state = std::move(normalized);
                E = E_norm;
                report.sign_normalized = true;
            }
        } catch (const projection_failure_error&) {
            // keep the unnormalized state
        }
    }

    const FiberScalars m = fiber_scalars(spec, state);
    const double scale = nehari_scale_at(spec, m, 1.0);
    report.nehari_residual_rel = scale > 0.0 ? std::abs(nehari_J_at(spec, m, 1.0)) / scale : 0.0;

    report.state = std::move(state);
    report.c_N_estimate = E;
    report.grad_norm_rel = grad_rel;
    report.iterations = std::min(iter, cfg.max_iters);
    report.converged = converged;
    report.stall_reason = converged ? "" : stall_reason;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

struct SweepRow {
    double mu = 0.0;
    double c_N = 0.0;
    double bound = 0.0;
    bool below_bound = false;
    bool converged = false;
    std::string error; // per-mu solver failure, sweep continues
};

struct SweepReport {
    std::vector<SweepRow> rows;
    double sharp_constant = 0.0;
    std::optional<double> empirical_mu0; // smallest sampled mu with c_N below the bound
};

// Proposition 4.1 sweep: solve per mu against the critical level bound
// (1/4 - 1/p) [(min{a1,a2} - delta) S]^{3/2}.
inline SweepReport mu_sweep(const ProblemSpec& spec_template, const std::vector<double>& mu_list,
                            const SolverConfig& cfg, double sharp_constant, int workers = 1) {
    if (spec_template.q != 6.0)
        throw wrong_regime_error("mu_sweep: the critical sweep requires q = 6");
    if (mu_list.empty()) throw config_error("mu_sweep: empty mu list");
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        if (!(mu_list[i] > 0.0)) throw config_error("mu_sweep: mu values must be positive");
        if (i > 0 && !(mu_list[i] > mu_list[i - 1]))
            throw config_error("mu_sweep: mu values must be strictly increasing");
    }

    const double min_a = std::min(spec_template.a1, spec_template.a2);
    const double bound = (0.25 - 1.0 / spec_template.p) *
                         std::pow((min_a - spec_template.potentials.delta) * sharp_constant, 1.5);

    auto run_one = [&](double mu) {
        SweepRow row;
        row.mu = mu;
        row.bound = bound;
        try {
            ProblemSpec spec(spec_template.a1, spec_template.a2, spec_template.alpha,
                             spec_template.beta, spec_template.potentials, mu, spec_template.p,
                             spec_template.q, spec_template.grid);
            SolveReport rep = solve_ground_state(spec, cfg);
            row.c_N = rep.c_N_estimate;
            row.converged = rep.converged;
            row.below_bound = row.c_N < bound;
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
        return row;
    };

    SweepReport report;
    report.sharp_constant = sharp_constant;
    report.rows.resize(mu_list.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < mu_list.size(); ++i) report.rows[i] = run_one(mu_list[i]);
    } else {
        std::vector<std::future<SweepRow>> futures;
        futures.reserve(mu_list.size());
        for (double mu : mu_list)
            futures.push_back(std::async(std::launch::async, run_one, mu));
        for (std::size_t i = 0; i < futures.size(); ++i) report.rows[i] = futures[i].get();
    }
    for (const auto& row : report.rows)
        if (row.error.empty() && row.below_bound) {
            report.empirical_mu0 = row.mu;
            break;
        }
    return report;
}

} // namespace nehari
