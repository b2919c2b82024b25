#pragma once

// Run configuration: parse, validate, and echo back.  The echo in a report
// reparses to an equivalent config, and identical configs always serialize
// to identical bytes (ordered keys, no timestamps).

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plapmix/eigensolver.hpp"
#include "plapmix/errors.hpp"
#include "plapmix/geometry.hpp"
#include "plapmix/kernel.hpp"

namespace plapmix {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
    Domain domain;
    Profile profile = Profile::Tent;
    double r_j = 1.0;
    std::vector<double> p_list{2.0};
    double alpha = 1.0;
    double beta = 1.0;
    double h = 0;    // one of h / nodes must be set; nodes divides the longest
    int nodes = 0;   // bounding-box side
    SolverOptions solver;
    bool task_solve = false;
    bool task_sweep = false;
    bool task_verify_formulas = false;
    bool task_viscosity = false;
    std::optional<double> sweep_gap_tol;
    std::optional<double> viscosity_threshold;
    std::string out_dir = "out";
    bool plotdata = true;

    double spacing() const {
        if (h > 0) return h;
        auto [lo, hi] = bounding_box(domain);
        double side = std::max(hi.x - lo.x, domain.dim == 2 ? hi.y - lo.y : 0.0);
        return side / nodes;
    }
};

namespace detail {

inline Point parse_point(const ordered_json& j, const char* what) {
    if (!j.is_array() || (j.size() != 1 && j.size() != 2))
        throw invalid_input(std::string(what) + " must be an array of 1 or 2 numbers");
    Point p;
    p.x = j[0].get<double>();
    if (j.size() == 2) p.y = j[1].get<double>();
    return p;
}

inline Domain parse_domain(const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "interval") return Domain::interval(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "box") return Domain::box(parse_point(j.at("lo"), "lo"), parse_point(j.at("hi"), "hi"));
    if (kind == "ball") return Domain::ball(parse_point(j.at("center"), "center"), j.at("radius").get<double>());
    if (kind == "polygon") {
        const auto& flat = j.at("vertices");
        if (!flat.is_array() || flat.size() < 6 || flat.size() % 2 != 0)
            throw invalid_input("polygon vertices must be a flat array x0,y0,x1,y1,...");
        std::vector<Point> vs;
        for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
            vs.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
        return Domain::polygon(std::move(vs));
    }
    throw invalid_input("unknown domain kind: " + kind);
}

inline ordered_json domain_json(const Domain& d) {
    ordered_json j;
    switch (d.kind) {
        case ShapeKind::Interval:
            j["kind"] = "interval";
            j["a"] = d.lo.x;
            j["b"] = d.hi.x;
            break;
        case ShapeKind::Box:
            j["kind"] = "box";
            j["lo"] = {d.lo.x, d.lo.y};
            j["hi"] = {d.hi.x, d.hi.y};
            break;
        case ShapeKind::Ball:
            j["kind"] = "ball";
            j["center"] = {d.center.x, d.center.y};
            j["radius"] = d.radius;
            break;
        case ShapeKind::Polygon: {
            j["kind"] = "polygon";
            ordered_json flat = ordered_json::array();
            for (const Point& v : d.vertices) {
                flat.push_back(v.x);
                flat.push_back(v.y);
            }
            j["vertices"] = flat;
            break;
        }
    }
    return j;
}

inline Profile parse_profile(const std::string& s) {
    if (s == "tent") return Profile::Tent;
    if (s == "bump") return Profile::Bump;
    if (s == "truncated-quadratic") return Profile::TruncatedQuadratic;
    throw invalid_input("unknown kernel profile: " + s);
}

} // namespace detail

inline RunConfig parse_config(const ordered_json& j) {
    RunConfig c;
    try {
        c.domain = detail::parse_domain(j.at("domain"));
        const auto& kj = j.at("kernel");
        c.profile = detail::parse_profile(kj.at("profile").get<std::string>());
        c.r_j = kj.at("r_j").get<double>();
        if (!(c.r_j > 0)) throw invalid_input("kernel r_j must be positive");

        const auto& sj = j.at("solver");
        if (sj.contains("p_list")) c.p_list = sj.at("p_list").get<std::vector<double>>();
        if (c.p_list.empty()) throw invalid_input("p_list must be nonempty");
        for (double p : c.p_list)
            if (!(p >= 2)) throw invalid_input("all p must be >= 2");
        c.alpha = sj.value("alpha", 1.0);
        c.beta = sj.value("beta", 1.0);
        if (c.alpha < 0 || c.beta < 0 || (c.alpha == 0 && c.beta == 0))
            throw invalid_input("alpha, beta must be nonnegative, not both zero");
        if (sj.contains("h")) c.h = sj.at("h").get<double>();
        if (sj.contains("nodes")) c.nodes = sj.at("nodes").get<int>();
        if (!(c.h > 0) && c.nodes <= 0) throw invalid_input("solver needs h > 0 or nodes > 0");
        c.solver.tol_lambda = sj.value("tol_lambda", 1e-10);
        c.solver.tol_grad = sj.value("tol_grad", 1e-8);
        c.solver.max_iters = sj.value("max_iters", 0);
        std::string init = sj.value("init", std::string("boundary-distance"));
        if (init == "boundary-distance") c.solver.init = InitKind::BoundaryDistance;
        else if (init == "uniform") c.solver.init = InitKind::Uniform;
        else throw invalid_input("unknown init: " + init);

        if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
            throw invalid_input("tasks must be a nonempty array");
        for (const auto& t : j.at("tasks")) {
            std::string s = t.get<std::string>();
            if (s == "solve") c.task_solve = true;
            else if (s == "sweep") c.task_sweep = true;
            else if (s == "verify-formulas") c.task_verify_formulas = true;
            else if (s == "viscosity-check") c.task_viscosity = true;
            else throw invalid_input("unknown task: " + s);
        }

        if (j.contains("verify")) {
            const auto& vj = j.at("verify");
            if (vj.contains("sweep_gap_tol")) c.sweep_gap_tol = vj.at("sweep_gap_tol").get<double>();
            if (vj.contains("viscosity_threshold"))
                c.viscosity_threshold = vj.at("viscosity_threshold").get<double>();
        }
        if (j.contains("output")) {
            const auto& oj = j.at("output");
            c.out_dir = oj.value("dir", std::string("out"));
            c.plotdata = oj.value("plotdata", true);
        }
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("config parse error: ") + e.what());
    }
    return c;
}

inline ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["domain"] = detail::domain_json(c.domain);
    j["kernel"] = {{"profile", profile_name(c.profile)}, {"r_j", c.r_j}};
    ordered_json sj;
    sj["p_list"] = c.p_list;
    sj["alpha"] = c.alpha;
    sj["beta"] = c.beta;
    if (c.h > 0) sj["h"] = c.h;
    else sj["nodes"] = c.nodes;
    sj["tol_lambda"] = c.solver.tol_lambda;
    sj["tol_grad"] = c.solver.tol_grad;
    sj["max_iters"] = c.solver.max_iters;
    sj["init"] = c.solver.init == InitKind::BoundaryDistance ? "boundary-distance" : "uniform";
    j["solver"] = sj;
    ordered_json tasks = ordered_json::array();
    if (c.task_solve) tasks.push_back("solve");
    if (c.task_sweep) tasks.push_back("sweep");
    if (c.task_verify_formulas) tasks.push_back("verify-formulas");
    if (c.task_viscosity) tasks.push_back("viscosity-check");
    j["tasks"] = tasks;
    if (c.sweep_gap_tol || c.viscosity_threshold) {
        ordered_json vj;
        if (c.sweep_gap_tol) vj["sweep_gap_tol"] = *c.sweep_gap_tol;
        if (c.viscosity_threshold) vj["viscosity_threshold"] = *c.viscosity_threshold;
        j["verify"] = vj;
    }
    j["output"] = {{"dir", c.out_dir}, {"plotdata", c.plotdata}};
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open config: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace plapmix
