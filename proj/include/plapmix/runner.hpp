#pragma once

// Orchestrates a configured run: geometry -> grid -> weights, then the
// requested tasks in the fixed order solve, sweep, verify-formulas,
// viscosity-check.  Produces a versioned JSON report plus CSV artifacts.
// Identical configs produce bit-identical reports: no timestamps, fixed
// iteration orders, no randomness anywhere in the pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "plapmix/config.hpp"
#include "plapmix/eigensolver.hpp"
#include "plapmix/limit.hpp"
#include "plapmix/viscosity.hpp"

namespace plapmix {

struct RunOutcome {
    ordered_json report;
    bool parse_ok = true;
    bool solver_ok = true;         // every requested solve converged
    bool verifications_ok = true;  // every requested check passed
    int exit_code() const {
        if (!parse_ok) return 2;
        if (!solver_ok) return 3;
        return verifications_ok ? 0 : 1;
    }
};

namespace detail {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
}

inline ordered_json eigen_json(const EigenReport& r) {
    ordered_json j;
    j["p"] = r.p;
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
    j["lambda1"] = r.lambda1;
    j["log_lambda1"] = r.log_lambda1;
    j["lambda1_root"] = r.lambda1_root;
    j["iters"] = r.iters;
    j["final_rel_change"] = r.final_rel_change;
    j["final_grad_metric"] = r.final_grad_metric;
    j["converged"] = r.converged;
    j["message"] = r.message;
    return j;
}

inline std::string field_csv(const Grid& g, const ScalarField& u) {
    std::string s = g.dim == 1 ? "x,value\n" : "x,y,value\n";
    for (int id : g.interior) {
        Point p = g.point(id);
        s += g17(p.x);
        if (g.dim == 2) s += "," + g17(p.y);
        s += "," + g17(u.v[id]) + "\n";
    }
    return s;
}

} // namespace detail

inline RunOutcome run_config(const RunConfig& cfg, const std::string& out_dir_override = "",
                             bool verbose = false) {
    RunOutcome out;
    std::filesystem::path dir = out_dir_override.empty() ? cfg.out_dir : out_dir_override;
    std::filesystem::create_directories(dir);

    RunConfig cfg_run = cfg;
    if (verbose) cfg_run.solver.trace_every = 10;

    ordered_json rep;
    rep["schema"] = "plapmix-report-v1";
    rep["config"] = config_json(cfg);

    InradiusData inr = make_inradius_data(cfg.domain, cfg.r_j);
    LambdaCase lc = lambda_formula(inr.r_omega, cfg.r_j, inr.k_omega, inr.b);
    rep["geometry"] = {{"r_omega", inr.r_omega},
                       {"center", {inr.center.x, inr.center.y}},
                       {"k_omega", inr.k_omega},
                       {"b", inr.b},
                       {"lambda", lc.lambda},
                       {"case", lambda_tag_name(lc.tag)}};

    double h = cfg.spacing();
    Grid grid = make_grid(cfg.domain, inr, cfg.r_j, h);
    Kernel kernel = Kernel::make(cfg.profile, cfg.r_j, cfg.domain.dim);
    WeightTable wt = make_weight_table(kernel, h);
    rep["grid"] = {{"h", h},
                   {"interior_nodes", static_cast<int>(grid.interior.size())},
                   {"band_nodes", static_cast<int>(grid.active.size() - grid.interior.size())},
                   {"offsets", static_cast<int>(wt.offsets.size())},
                   {"raw_weight_sum", wt.raw_sum}};

    ordered_json results;
    const EigenReport* last_field_report = nullptr;
    std::vector<EigenReport> sweep_reports;
    EigenReport solve_report;

    if (cfg.task_solve) {
        double p = cfg.p_list.front();
        bool converged = true;
        try {
            solve_report = solve_first(grid, wt, p, cfg.alpha, cfg.beta, cfg_run.solver);
        } catch (const solve_error& e) {
            solve_report = e.best;
            converged = false;
            out.solver_ok = false;
        }
        results["solve"] = detail::eigen_json(solve_report);
        if (converged || !solve_report.field.v.empty()) last_field_report = &solve_report;
        detail::write_text(dir / "eigenfield.csv", detail::field_csv(grid, solve_report.field));
        if (verbose && !solve_report.trace.empty()) {
            std::string tr = "iter,lambda_root,rel_change,grad_metric,step\n";
            for (const IterSample& s : solve_report.trace)
                tr += std::to_string(s.iter) + "," + detail::g17(s.lambda_root) + "," +
                      detail::g17(s.rel_change) + "," + detail::g17(s.grad_metric) + "," +
                      detail::g17(s.step) + "\n";
            detail::write_text(dir / ("trace_p" + detail::g17(p) + ".csv"), tr);
        }
    }

    if (cfg.task_sweep) {
        sweep_reports = sweep_p(grid, wt, cfg.p_list, cfg.alpha, cfg.beta, cfg_run.solver);
        ordered_json entries = ordered_json::array();
        std::string csv = "p,lambda_root,Lambda\n";
        double final_gap = 0;
        for (const EigenReport& r : sweep_reports) {
            ordered_json e = detail::eigen_json(r);
            e["gap_to_lambda"] = std::abs(r.lambda1_root - lc.lambda);
            entries.push_back(e);
            csv += detail::g17(r.p) + "," + detail::g17(r.lambda1_root) + "," +
                   detail::g17(lc.lambda) + "\n";
            final_gap = std::abs(r.lambda1_root - lc.lambda);
            if (!r.converged) out.solver_ok = false;
        }
        ordered_json sj;
        sj["entries"] = entries;
        sj["final_gap"] = final_gap;
        if (cfg.sweep_gap_tol) {
            bool pass = final_gap <= *cfg.sweep_gap_tol;
            sj["gap_tol"] = *cfg.sweep_gap_tol;
            sj["pass"] = pass;
            if (!pass) out.verifications_ok = false;
        }
        results["sweep"] = sj;
        if (cfg.plotdata) detail::write_text(dir / "sweep.csv", csv);
        if (!sweep_reports.empty()) {
            last_field_report = &sweep_reports.back();
            detail::write_text(dir / "eigenfield.csv",
                               detail::field_csv(grid, sweep_reports.back().field));
        }
    }

    if (cfg.task_verify_formulas) {
        ordered_json vj;
        vj["lambda"] = lc.lambda;
        vj["case"] = lambda_tag_name(lc.tag);
        ordered_json checks = ordered_json::array();
        bool all_ok = true;
        auto add_check = [&](const char* name, const ScalarField& f,
                             std::optional<double> lip) {
            BoundCheck bc = verify_lower_bounds(grid, f, lc, lip);
            ordered_json cj;
            cj["field"] = name;
            cj["sup_grad"] = bc.q.sup_grad;
            cj["j_seminorm"] = bc.q.j_seminorm;
            cj["sup_norm"] = bc.q.sup_norm;
            cj["quotient"] = bc.q.quotient;
            cj["margin"] = bc.margin;
            cj["eps_grid"] = bc.eps_grid;
            cj["pass"] = bc.ok;
            checks.push_back(cj);
            all_ok = all_ok && bc.ok;
        };
        add_check("cone", build_cone(grid, inr.center, inr.r_omega), 1.0 / inr.r_omega);
        if (inr.k_omega >= 1 && inr.b > 0) {
            add_check("staircase", build_staircase(grid, inr.center, cfg.r_j, inr.k_omega, inr.b),
                      1.0 / ((inr.k_omega + 1) * inr.b));
            if (inr.b < 1.0 && cfg.r_j > 1.0)
                add_check("profile-z", build_profile_z(grid, inr.center, cfg.r_j, inr.k_omega, inr.b),
                          1.0 / (inr.k_omega + inr.b));
        }
        vj["checks"] = checks;
        vj["pass"] = all_ok;
        if (!all_ok) out.verifications_ok = false;
        results["verify_formulas"] = vj;
    }

    if (cfg.task_viscosity) {
        // Residuals are evaluated on the largest-p eigenfield when one was
        // computed, otherwise on the cone.
        ScalarField field;
        std::string source;
        if (!sweep_reports.empty()) {
            field = sweep_reports.back().field;
            source = "sweep-final";
        } else if (last_field_report) {
            field = last_field_report->field;
            source = "solve";
        } else {
            field = build_cone(grid, inr.center, inr.r_omega);
            source = "cone";
        }
        double sup = sup_norm(grid, field);
        if (sup == 0) throw undefined_quotient("viscosity check on a zero field");
        for (int id : grid.interior) field.v[id] /= sup;
        ViscosityResidual vr = residual_report(grid, field, cfg.r_j, lc.lambda);
        ordered_json vj;
        vj["field_source"] = source;
        vj["lambda"] = lc.lambda;
        vj["robust_nodes"] = vr.robust_count;
        vj["skipped_nodes"] = vr.skipped;
        vj["sup_residual"] = vr.sup_residual_robust;
        vj["mean_abs_residual"] = vr.mean_abs_residual_robust;
        if (cfg.viscosity_threshold) {
            bool pass = vr.sup_residual_robust <= *cfg.viscosity_threshold;
            vj["threshold"] = *cfg.viscosity_threshold;
            vj["pass"] = pass;
            if (!pass) out.verifications_ok = false;
        }
        results["viscosity_check"] = vj;

        std::string csv = grid.dim == 1 ? "x,u,m1,m2,residual,degenerate,robust\n"
                                        : "x,y,u,m1,m2,residual,degenerate,robust\n";
        for (const NodeResidual& nr : vr.nodes) {
            csv += detail::g17(nr.x.x);
            if (grid.dim == 2) csv += "," + detail::g17(nr.x.y);
            csv += "," + detail::g17(nr.u) + "," + detail::g17(nr.m1) + "," + detail::g17(nr.m2) +
                   "," + detail::g17(nr.residual) + "," + (nr.degenerate ? "1" : "0") + "," +
                   (nr.robust ? "1" : "0") + "\n";
        }
        detail::write_text(dir / "residual.csv", csv);
    }

    rep["results"] = results;
    rep["ok"] = out.solver_ok && out.verifications_ok;
    out.report = rep;
    detail::write_text(dir / "report.json", rep.dump(2) + "\n");
    return out;
}

} // namespace plapmix
