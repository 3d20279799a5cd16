// Command-line driver: ground-state solves, mu sweeps, hypothesis
// validation, Pohozaev diagnostics, and the Sobolev-constant ladder.
//
// Exit codes: 0 success/converged, 1 configuration or input error, 2 solver
// stall (no convergence below grad_tol).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nehari/config.hpp"
#include "nehari/diagnostics.hpp"
#include "nehari/model.hpp"
#include "nehari/reporting.hpp"
#include "nehari/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_solve(const std::string& config_path, const std::string& out_dir, bool deterministic) {
    nehari::RunInputs in = nehari::load_config(config_path);
    fs::create_directories(out_dir);

    std::optional<nehari::StatePair> initial;
    if (in.solver.init == "file") {
        if (in.solver.init_u_path.empty() || in.solver.init_v_path.empty())
            throw nehari::config_error("solver.init = file requires init_u and init_v paths");
        nehari::ScalarField u = nehari::read_field(in.solver.init_u_path);
        nehari::ScalarField v = nehari::read_field(in.solver.init_v_path);
        if (!(u.grid == in.spec.grid))
            throw nehari::config_error("solve: init fields sampled on a different grid");
        initial = nehari::StatePair(std::move(u), std::move(v));
        in.solver.init = "gaussian_bump"; // placeholder, state comes from `initial`
    }

    nehari::SolveReport rep = nehari::solve_ground_state(in.spec, in.solver, initial);

    const std::string hash = nehari::config_hash(in.raw);
    nehari::write_json((fs::path(out_dir) / "report.json").string(),
                       nehari::solve_report_json(rep, deterministic));
    nehari::write_trace_csv((fs::path(out_dir) / "trace.csv").string(), rep.energy_trace);
    nehari::write_field((fs::path(out_dir) / "u.bin").string(), rep.state.u, "u");
    nehari::write_field((fs::path(out_dir) / "v.bin").string(), rep.state.v, "v");
    nehari::write_manifest(out_dir, hash, "solve " + config_path,
                           {{"report.json", "solve report"},
                            {"trace.csv", "descent trace"},
                            {"u.bin", "first component field"},
                            {"u.bin.json", "field sidecar"},
                            {"v.bin", "second component field"},
                            {"v.bin.json", "field sidecar"}},
                           in.solver.seed);

    std::cout << (rep.converged ? "converged" : "stalled") << "  c_N=" << rep.c_N_estimate
              << "  grad_norm_rel=" << rep.grad_norm_rel << "  iters=" << rep.iterations << '\n';
    if (!rep.converged) std::cout << "stall: " << rep.stall_reason << '\n';
    return rep.converged ? 0 : 2;
}

int run_sweep(const std::string& config_path, const std::vector<double>& mu_list,
              const std::string& out_dir, int workers, bool deterministic) {
    nehari::RunInputs in = nehari::load_config(config_path);
    fs::create_directories(out_dir);

    const double S = nehari::sharp_sobolev_reference;
    nehari::SweepReport sweep = nehari::mu_sweep(in.spec, mu_list, in.solver, S, workers);

    nehari::write_sweep_csv((fs::path(out_dir) / "sweep.csv").string(), sweep);
    std::vector<nehari::ManifestOutput> outputs{{"sweep.csv", "mu sweep table"}};
    json per_mu = json::array();
    for (const auto& row : sweep.rows) {
        json r = {{"mu", row.mu},
                  {"c_N", row.c_N},
                  {"bound", row.bound},
                  {"below_bound", row.below_bound},
                  {"converged", row.converged}};
        if (!row.error.empty()) r["error"] = row.error;
        per_mu.push_back(r);
    }
    json report = {{"sharp_constant", S}, {"rows", per_mu}};
    if (sweep.empirical_mu0) report["empirical_mu0"] = *sweep.empirical_mu0;
    if (!deterministic) report["workers"] = workers;
    nehari::write_json((fs::path(out_dir) / "report.json").string(), report);
    outputs.push_back({"report.json", "per-mu reports"});
    nehari::write_manifest(out_dir, nehari::config_hash(in.raw), "sweep-mu " + config_path,
                           outputs, in.solver.seed);

    for (const auto& row : sweep.rows)
        std::cout << "mu=" << row.mu << "  c_N=" << row.c_N << "  bound=" << row.bound
                  << "  below=" << (row.below_bound ? "yes" : "no")
                  << (row.error.empty() ? "" : "  error: " + row.error) << '\n';
    return 0;
}

void print_validation(const nehari::ValidationReport& rep) {
    for (const auto& e : rep.entries) {
        std::cout << "  " << e.hypothesis << "  "
                  << (e.pass ? (e.warning ? "pass (warning)" : "pass") : "FAIL");
        if (!e.message.empty()) std::cout << "  " << e.message;
        std::cout << '\n';
    }
}

int run_validate(const std::string& config_path, bool with_v45) {
    nehari::RunInputs in = nehari::load_config(config_path);
    nehari::ValidationReport m =
        nehari::validate_M(in.spec.alpha, in.spec.beta);
    nehari::ValidationReport v =
        nehari::validate_V(in.spec.potentials, in.spec.a1, in.spec.a2, in.spec.grid);

    std::cout << "Kirchhoff functions (" << in.spec.alpha.family << ", " << in.spec.beta.family
              << "):\n";
    print_validation(m);
    std::cout << "potentials:\n";
    print_validation(v);

    bool ok = m.all_passed() && v.all_passed();
    if (with_v45) {
        nehari::ValidationReport v45 = nehari::validate_V45(in.spec.potentials, in.spec.grid);
        std::cout << "radial conditions:\n";
        print_validation(v45);
        ok = ok && v45.all_passed();
    }
    std::cout << (ok ? "all hypotheses hold" : "hypothesis failure") << '\n';
    return ok ? 0 : 2;
}

int run_pohozaev(const std::string& config_path, const std::string& u_path,
                 const std::string& v_path, const std::string& out_dir) {
    nehari::RunInputs in = nehari::load_config(config_path);
    nehari::ScalarField u = nehari::read_field(u_path);
    nehari::ScalarField v = nehari::read_field(v_path);
    if (!(u.grid == in.spec.grid) || !(v.grid == in.spec.grid))
        throw nehari::config_error("pohozaev: state files sampled on a different grid");
    nehari::StatePair state(std::move(u), std::move(v));
    fs::create_directories(out_dir);

    nehari::PohozaevReport rep = nehari::pohozaev_residual(in.spec, state);
    json report = nehari::pohozaev_report_json(rep);
    if (rep.boundary_mass > 1e-3)
        std::cout << "warning: boundary_mass " << rep.boundary_mass
                  << " > 1e-3, truncation degrades the x-weighted integrals\n";

    std::vector<nehari::ManifestOutput> outputs{{"report.json", "Pohozaev report"},
                                                {"terms.csv", "term table"}};
    if (in.spec.p == 6.0 && in.spec.q == 6.0) {
        bool positive = true;
        for (double x : state.u.values)
            if (!(x > 0.0)) { positive = false; break; }
        if (positive)
            for (double x : state.v.values)
                if (!(x > 0.0)) { positive = false; break; }
        if (positive) {
            nehari::NonexistenceCertificate cert = nehari::nonexistence_certificate(in.spec, state);
            report["certificate"] = nehari::certificate_json(cert);
            std::cout << "certificate: " << cert.verdict << '\n';
        } else {
            std::cout << "state not strictly positive; certificate skipped\n";
        }
    }
    nehari::write_json((fs::path(out_dir) / "report.json").string(), report);
    nehari::write_term_csv((fs::path(out_dir) / "terms.csv").string(), rep);
    nehari::write_manifest(out_dir, nehari::config_hash(in.raw),
                           "pohozaev " + config_path + " " + u_path + " " + v_path, outputs,
                           in.solver.seed);

    std::cout << "lhs=" << rep.lhs << "  rhs=" << rep.rhs << "  residual=" << rep.residual
              << (rep.extended ? "  (extended subcritical form)" : "") << '\n';
    return 0;
}

int run_sobolev(bool recompute) {
    if (!recompute) {
        std::cout << "S = " << std::setprecision(16) << nehari::sharp_sobolev_reference
                  << "  (cached; exact value 3*(pi/2)^(4/3))\n";
        return 0;
    }
    nehari::SobolevEstimate est = nehari::sobolev_constant();
    for (std::size_t i = 0; i < est.quotients.size(); ++i)
        std::cout << "L=" << est.box_lengths[i] << "  quotient=" << est.quotients[i] << '\n';
    std::cout << "estimate = " << est.estimate << " +/- " << est.error_bar
              << "  (reference " << est.reference << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground states of linearly coupled Kirchhoff-Schroedinger systems "
                 "via Nehari-manifold minimization on a periodic box"};
    app.require_subcommand(1);
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "omit timing fields so identical configs give byte-identical reports");

    std::string config_path, out_dir = "out";

    auto* solve = app.add_subcommand("solve", "minimize the energy over the Nehari manifold");
    solve->add_option("config", config_path, "problem configuration (JSON)")->required();
    solve->add_option("-o,--out", out_dir, "output directory");

    std::vector<double> mu_list{1, 2, 4, 8, 16};
    int workers = 1;
    auto* sweep = app.add_subcommand("sweep-mu", "solve per mu against the critical level bound");
    sweep->add_option("config", config_path, "problem configuration (q = 6)")->required();
    sweep->add_option("--mu", mu_list, "increasing list of mu values");
    sweep->add_option("--workers", workers, "concurrent solves");
    sweep->add_option("-o,--out", out_dir, "output directory");

    bool with_v45 = false;
    auto* validate = app.add_subcommand("validate", "check the structural hypotheses by sampling");
    validate->add_option("config", config_path, "problem configuration")->required();
    validate->add_flag("--v45", with_v45, "also check the radial potential conditions");

    std::string u_path, v_path;
    auto* pohozaev = app.add_subcommand("pohozaev", "Pohozaev residual of a stored state");
    pohozaev->add_option("config", config_path, "problem configuration")->required();
    pohozaev->add_option("u", u_path, "first component field dump")->required();
    pohozaev->add_option("v", v_path, "second component field dump")->required();
    pohozaev->add_option("-o,--out", out_dir, "output directory");

    bool recompute = false;
    auto* sobolev = app.add_subcommand("sobolev", "print the sharp Sobolev constant estimate");
    sobolev->add_flag("--recompute", recompute, "rerun the box ladder instead of the cached value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(config_path, out_dir, deterministic);
        if (sweep->parsed()) return run_sweep(config_path, mu_list, out_dir, workers, deterministic);
        if (validate->parsed()) return run_validate(config_path, with_v45);
        if (pohozaev->parsed()) return run_pohozaev(config_path, u_path, v_path, out_dir);
        if (sobolev->parsed()) return run_sobolev(recompute);
    } catch (const nehari::config_error& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return 1;
    } catch (const nehari::error& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
