#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nehari/errors.hpp"
#include "nehari/expr.hpp"
#include "nehari/model.hpp"
#include "nehari/solver.hpp"

namespace nehari {

struct RunInputs {
    ProblemSpec spec;
    SolverConfig solver;
    std::string V1_expr, V2_expr, lambda_expr;
    nlohmann::json raw; // resolved config (defaults filled in)
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw config_error("config: missing or non-numeric key '" + key + "'");
    return j.at(key).get<double>();
}

inline std::string require_string(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw config_error("config: missing or non-string key '" + key + "'");
    return j.at(key).get<std::string>();
}

inline KirchhoffSpec family_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_object())
        throw config_error("config: missing object key '" + key + "'");
    const auto& fam = j.at(key);
    std::vector<double> params;
    if (fam.contains("params")) {
        if (!fam.at("params").is_array())
            throw config_error("config: '" + key + ".params' must be an array");
        params = fam.at("params").get<std::vector<double>>();
    }
    try {
        return make_family(require_string(fam, "family"), params);
    } catch (const invalid_family_error& ex) {
        throw config_error("config: '" + key + "': " + ex.what());
    }
}

} // namespace detail

inline RunInputs parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("config: top level must be an object");

    if (!j.contains("grid") || !j.at("grid").is_object())
        throw config_error("config: missing 'grid' object");
    const int n = static_cast<int>(detail::require_number(j.at("grid"), "n"));
    const double L = detail::require_number(j.at("grid"), "L");
    Grid grid(n, L);

    RunInputs in;
    in.V1_expr = detail::require_string(j, "V1_expr");
    in.V2_expr = detail::require_string(j, "V2_expr");
    in.lambda_expr = detail::require_string(j, "lambda_expr");
    auto V1 = compile_expression(in.V1_expr);
    auto V2 = compile_expression(in.V2_expr);
    auto lam = compile_expression(in.lambda_expr);

    PotentialSet pots(grid, V1, V2, lam, detail::require_number(j, "delta"));
    in.spec = ProblemSpec(detail::require_number(j, "a1"), detail::require_number(j, "a2"),
                          detail::family_from_json(j, "alpha"), detail::family_from_json(j, "beta"),
                          std::move(pots), detail::require_number(j, "mu"),
                          detail::require_number(j, "p"), detail::require_number(j, "q"), grid);

    SolverConfig sc;
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        if (!s.is_object()) throw config_error("config: 'solver' must be an object");
        if (s.contains("max_iters")) sc.max_iters = s.at("max_iters").get<int>();
        if (s.contains("grad_tol")) sc.grad_tol = s.at("grad_tol").get<double>();
        if (s.contains("step0")) sc.step0 = s.at("step0").get<double>();
        if (s.contains("backtrack_shrink")) sc.backtrack_shrink = s.at("backtrack_shrink").get<double>();
        if (s.contains("backtrack_max_halvings"))
            sc.backtrack_max_halvings = s.at("backtrack_max_halvings").get<int>();
        if (s.contains("seed")) sc.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("init")) sc.init = s.at("init").get<std::string>();
        if (s.contains("init_u")) sc.init_u_path = s.at("init_u").get<std::string>();
        if (s.contains("init_v")) sc.init_v_path = s.at("init_v").get<std::string>();
    }
    sc.validate();
    in.solver = sc;

    // Resolved config with every default made explicit, so the hash pins the
    // run even when the file omits solver keys.
    nlohmann::json resolved = j;
    resolved["solver"] = {{"max_iters", sc.max_iters},
                          {"grad_tol", sc.grad_tol},
                          {"step0", sc.step0},
                          {"backtrack_shrink", sc.backtrack_shrink},
                          {"backtrack_max_halvings", sc.backtrack_max_halvings},
                          {"seed", sc.seed},
                          {"init", sc.init}};
    if (!sc.init_u_path.empty()) resolved["solver"]["init_u"] = sc.init_u_path;
    if (!sc.init_v_path.empty()) resolved["solver"]["init_v"] = sc.init_v_path;
    in.raw = std::move(resolved);
    return in;
}

inline RunInputs load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& ex) {
        throw config_error("config: " + std::string(ex.what()));
    }
    return parse_config(j);
}

// FNV-1a over the canonical (key-sorted) dump; nlohmann::json stores object
// keys sorted, so reordering keys in the file cannot change the hash.
inline std::string config_hash(const nlohmann::json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

} // namespace nehari
