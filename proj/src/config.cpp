#include "wulff/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wulff/errors.hpp"

namespace wulff {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!known.count(key))
            throw ConfigError("config: unknown key '" + key + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError("config: missing numeric '" + key + "' in " + where);
    return obj[key].get<double>();
}

NormSpec parse_norm(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("config: norm must be an object with a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "euclidean") {
        reject_unknown_keys(j, {"kind"}, "norm");
        return make_euclidean();
    }
    if (kind == "ellipse") {
        reject_unknown_keys(j, {"kind", "A"}, "norm");
        if (!j.contains("A") || !j["A"].is_array() || j["A"].size() != 3)
            throw ConfigError("config: ellipse norm needs A = [a11, a12, a22]");
        return make_ellipse(j["A"][0].get<double>(), j["A"][1].get<double>(),
                            j["A"][2].get<double>());
    }
    if (kind == "smoothed_q") {
        reject_unknown_keys(j, {"kind", "q", "delta"}, "norm");
        return make_smoothed_q(require_number(j, "q", "norm"), require_number(j, "delta", "norm"));
    }
    throw ConfigError("config: unknown norm kind '" + kind + "'");
}

WeightSpec parse_weight(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("config: weight must be an object with a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind"}, "weight");
        return make_constant_weight();
    }
    if (kind == "monomial") {
        reject_unknown_keys(j, {"kind", "a", "b"}, "weight");
        return make_monomial_weight(require_number(j, "a", "weight"),
                                    require_number(j, "b", "weight"));
    }
    throw ConfigError("config: unknown weight kind '" + kind + "'");
}

ConeSpec parse_cone(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("config: cone must be an object with a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "full_plane") {
        reject_unknown_keys(j, {"kind"}, "cone");
        return make_full_plane();
    }
    if (kind == "half_plane") {
        reject_unknown_keys(j, {"kind", "normal_angle"}, "cone");
        return make_half_plane(require_number(j, "normal_angle", "cone"));
    }
    if (kind == "sector") {
        reject_unknown_keys(j, {"kind", "theta1", "theta2"}, "cone");
        return make_sector(require_number(j, "theta1", "cone"),
                           require_number(j, "theta2", "cone"));
    }
    throw ConfigError("config: unknown cone kind '" + kind + "'");
}

SourceSpec parse_source(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("config: f must be an object with a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    SourceSpec f;
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "c0", "phi"}, "f");
        f = make_constant_source(require_number(j, "c0", "f"));
    } else if (kind == "power") {
        reject_unknown_keys(j, {"kind", "q", "phi"}, "f");
        f = make_power_source(require_number(j, "q", "f"));
    } else if (kind == "step") {
        reject_unknown_keys(j, {"kind", "a", "b", "s", "phi"}, "f");
        f = make_step_source(require_number(j, "a", "f"), require_number(j, "b", "f"),
                             require_number(j, "s", "f"));
    } else {
        throw ConfigError("config: unknown source kind '" + kind + "'");
    }
    if (j.contains("phi")) {
        const json& phi = j["phi"];
        reject_unknown_keys(phi, {"s", "v"}, "f.phi");
        if (!phi.contains("s") || !phi.contains("v") || !phi["s"].is_array() ||
            !phi["v"].is_array() || phi["s"].size() != phi["v"].size())
            throw ConfigError("config: f.phi needs equal-length arrays 's' and 'v'");
        for (const auto& v : phi["s"]) f.phi_s.push_back(v.get<double>());
        for (const auto& v : phi["v"]) f.phi_v.push_back(v.get<double>());
    }
    return f;
}

} // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    reject_unknown_keys(j, {"problem", "mesh", "solver", "diagnostics", "output", "seed"},
                        "the top level");
    if (!j.contains("problem")) throw ConfigError("config: missing 'problem' block");

    RunConfig cfg;
    const json& p = j["problem"];
    reject_unknown_keys(p, {"p", "norm", "weight", "cone", "R", "f", "condition"}, "problem");
    const NormSpec H = p.contains("norm") ? parse_norm(p["norm"]) : make_euclidean();
    const WeightSpec w = p.contains("weight") ? parse_weight(p["weight"]) : make_constant_weight();
    const ConeSpec cone = p.contains("cone") ? parse_cone(p["cone"]) : make_full_plane();
    const SourceSpec f = p.contains("f") ? parse_source(p["f"]) : make_constant_source(1.0);
    const double pexp = require_number(p, "p", "problem");
    const double R = p.contains("R") ? require_number(p, "R", "problem") : 1.0;
    bool condition_b = false;
    if (p.contains("condition")) {
        const std::string mode = p["condition"].get<std::string>();
        if (mode == "b")
            condition_b = true;
        else if (mode != "a" && mode != "auto")
            throw ConfigError("config: problem.condition must be 'a', 'b' or 'auto'");
    }
    cfg.problem = make_problem(pexp, H, w, cone, R, f, condition_b);

    if (j.contains("mesh")) {
        const json& m = j["mesh"];
        reject_unknown_keys(m, {"h", "grading"}, "mesh");
        if (m.contains("h")) cfg.mesh.h = require_number(m, "h", "mesh");
        if (m.contains("grading")) cfg.mesh.grading = m["grading"].get<bool>();
    }
    if (!(cfg.mesh.h > 0.0) || cfg.mesh.h > cfg.problem.R / 4.0)
        throw ConfigError("config: mesh.h must satisfy 0 < h <= R/4");

    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown_keys(s, {"tol", "max_iter", "eps_schedule", "lbfgs_memory", "max_outer"},
                            "solver");
        if (s.contains("tol")) cfg.solver.tol = require_number(s, "tol", "solver");
        if (s.contains("max_iter")) cfg.solver.max_iter = s["max_iter"].get<int>();
        if (s.contains("lbfgs_memory")) cfg.solver.lbfgs_memory = s["lbfgs_memory"].get<int>();
        if (s.contains("max_outer")) cfg.solver.max_outer = s["max_outer"].get<int>();
        if (s.contains("eps_schedule")) {
            cfg.solver.eps_schedule.clear();
            for (const auto& v : s["eps_schedule"])
                cfg.solver.eps_schedule.push_back(v.get<double>());
            if (cfg.solver.eps_schedule.empty())
                throw ConfigError("config: eps_schedule must not be empty");
        }
        if (!(cfg.solver.tol > 0.0) || cfg.solver.max_iter < 1)
            throw ConfigError("config: solver.tol must be positive and max_iter >= 1");
    }

    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        reject_unknown_keys(d,
                            {"n_levels", "gauss_green_tol", "holder_tol", "quotient_tol",
                             "grad_cv_tol", "k_increment_tol", "mu_slack_tol", "pohozaev_tol",
                             "center_drift_factor", "nesting_factor", "profile_deviation_factor",
                             "isop_sets", "isop_arc_points", "isop_boundary_points"},
                            "diagnostics");
        DiagnosticsConfig& dc = cfg.diagnostics;
        if (d.contains("n_levels")) dc.n_levels = d["n_levels"].get<int>();
        if (d.contains("gauss_green_tol")) dc.gauss_green_tol = d["gauss_green_tol"].get<double>();
        if (d.contains("holder_tol")) dc.holder_tol = d["holder_tol"].get<double>();
        if (d.contains("quotient_tol")) dc.quotient_tol = d["quotient_tol"].get<double>();
        if (d.contains("grad_cv_tol")) dc.grad_cv_tol = d["grad_cv_tol"].get<double>();
        if (d.contains("k_increment_tol")) dc.k_increment_tol = d["k_increment_tol"].get<double>();
        if (d.contains("mu_slack_tol")) dc.mu_slack_tol = d["mu_slack_tol"].get<double>();
        if (d.contains("pohozaev_tol")) dc.pohozaev_tol = d["pohozaev_tol"].get<double>();
        if (d.contains("center_drift_factor"))
            dc.center_drift_factor = d["center_drift_factor"].get<double>();
        if (d.contains("nesting_factor")) dc.nesting_factor = d["nesting_factor"].get<double>();
        if (d.contains("profile_deviation_factor"))
            dc.profile_deviation_factor = d["profile_deviation_factor"].get<double>();
        if (d.contains("isop_sets")) dc.isop_sets = d["isop_sets"].get<int>();
        if (d.contains("isop_arc_points")) dc.isop_arc_points = d["isop_arc_points"].get<int>();
        if (d.contains("isop_boundary_points"))
            dc.isop_boundary_points = d["isop_boundary_points"].get<int>();
        if (dc.n_levels < 2 || dc.isop_sets < 1 || dc.isop_arc_points < 8 ||
            dc.isop_boundary_points < 8)
            throw ConfigError("config: diagnostics counts out of range");
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown_keys(o, {"directory", "formats"}, "output");
        if (o.contains("directory")) cfg.output.directory = o["directory"].get<std::string>();
        if (o.contains("formats")) {
            cfg.output.csv = cfg.output.json = cfg.output.svg = false;
            for (const auto& fjson : o["formats"]) {
                const std::string fmt = fjson.get<std::string>();
                if (fmt == "csv")
                    cfg.output.csv = true;
                else if (fmt == "json")
                    cfg.output.json = true;
                else if (fmt == "svg")
                    cfg.output.svg = true;
                else
                    throw ConfigError("config: unknown output format '" + fmt + "'");
            }
        }
    }

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

} // namespace wulff
