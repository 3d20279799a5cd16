#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/diagnostics.hpp"
#include "nehari/errors.hpp"
#include "nehari/grid.hpp"
#include "nehari/solver.hpp"

namespace nehari {

// Field dump: 8-byte little-endian count n, then n^3 doubles row-major,
// plus a JSON sidecar <path>.json with {n, box_length, label}.
inline void write_field(const std::string& path, const ScalarField& f, const std::string& label) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw error("write_field: cannot open '" + path + "'");
    const std::uint64_t n = static_cast<std::uint64_t>(f.grid.n);
    bin.write(reinterpret_cast<const char*>(&n), 8);
    bin.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!bin) throw error("write_field: short write to '" + path + "'");

    nlohmann::json side = {{"n", f.grid.n}, {"box_length", f.grid.box_length}, {"label", label}};
    std::ofstream js(path + ".json");
    js << side.dump(2) << '\n';
}

inline ScalarField read_field(const std::string& path) {
    std::ifstream side_in(path + ".json");
    if (!side_in) throw error("read_field: missing sidecar '" + path + ".json'");
    nlohmann::json side = nlohmann::json::parse(side_in);
    Grid g(side.at("n").get<int>(), side.at("box_length").get<double>());

    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw error("read_field: cannot open '" + path + "'");
    std::uint64_t n = 0;
    bin.read(reinterpret_cast<char*>(&n), 8);
    if (!bin || n != static_cast<std::uint64_t>(g.n))
        throw error("read_field: header count disagrees with sidecar in '" + path + "'");
    ScalarField f(g);
    bin.read(reinterpret_cast<char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!bin) throw error("read_field: truncated data in '" + path + "'");
    return f;
}

namespace detail {

inline std::string csv_num(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

} // namespace detail

inline void write_trace_csv(const std::string& path, const std::vector<TraceEntry>& trace) {
    std::ofstream out(path);
    if (!out) throw error("write_trace_csv: cannot open '" + path + "'");
    out << "iter,energy,grad_norm,t0,step,state_norm_sq\n";
    for (const auto& e : trace)
        out << e.iter << ',' << detail::csv_num(e.energy) << ',' << detail::csv_num(e.grad_norm_rel)
            << ',' << detail::csv_num(e.t0) << ',' << detail::csv_num(e.step) << ','
            << detail::csv_num(e.state_norm_sq) << '\n';
}

inline void write_sweep_csv(const std::string& path, const SweepReport& sweep) {
    std::ofstream out(path);
    if (!out) throw error("write_sweep_csv: cannot open '" + path + "'");
    out << "mu,c_N,bound,below_bound\n";
    for (const auto& row : sweep.rows)
        out << detail::csv_num(row.mu) << ',' << detail::csv_num(row.c_N) << ','
            << detail::csv_num(row.bound) << ',' << (row.below_bound ? "true" : "false") << '\n';
}

inline void write_term_csv(const std::string& path, const PohozaevReport& rep) {
    std::ofstream out(path);
    if (!out) throw error("write_term_csv: cannot open '" + path + "'");
    out << "term,value\n";
    for (const auto& t : rep.term_table) out << t.name << ',' << detail::csv_num(t.value) << '\n';
}

inline nlohmann::json solve_report_json(const SolveReport& rep, bool deterministic) {
    nlohmann::json j = {
        {"c_N_estimate", rep.c_N_estimate},
        {"grad_norm_rel", rep.grad_norm_rel},
        {"iterations", rep.iterations},
        {"converged", rep.converged},
        {"sign_normalized", rep.sign_normalized},
        {"nehari_residual_rel", rep.nehari_residual_rel},
    };
    if (!rep.stall_reason.empty()) j["stall_reason"] = rep.stall_reason;
    // Timing is excluded from deterministic runs so identical configs yield
    // byte-identical reports.
    if (!deterministic) j["wall_time_s"] = rep.wall_time_s;
    return j;
}

inline nlohmann::json pohozaev_report_json(const PohozaevReport& rep) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& t : rep.term_table) terms[t.name] = t.value;
    return {{"lhs", rep.lhs},
            {"rhs", rep.rhs},
            {"residual", rep.residual},
            {"boundary_mass", rep.boundary_mass},
            {"extended", rep.extended},
            {"terms", terms}};
}

inline nlohmann::json certificate_json(const NonexistenceCertificate& cert) {
    return {{"Q", cert.Q},
            {"pohozaev_bound", cert.pohozaev_bound},
            {"strict_lower", cert.strict_lower},
            {"verdict", cert.verdict},
            {"detail", cert.detail}};
}

struct ManifestOutput {
    std::string path;
    std::string role;
};

// manifest.json: records the resolved config hash, the invocation, and every
// emitted file.  Written last so it can list everything else.
inline void write_manifest(const std::string& dir, const std::string& hash,
                           const std::string& command, const std::vector<ManifestOutput>& outputs,
                           std::uint64_t seed) {
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"role", o.role}});
    nlohmann::json j = {{"config_hash", hash},
                        {"command", command},
                        {"outputs", outs},
                        {"versions", "0.1.0"},
                        {"seed", seed}};
    std::ofstream out((std::filesystem::path(dir) / "manifest.json").string());
    if (!out) throw error("write_manifest: cannot open manifest.json in '" + dir + "'");
    out << j.dump(2) << '\n';
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw error("write_json: cannot open '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace nehari
