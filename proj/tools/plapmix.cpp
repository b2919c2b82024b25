// plapmix: first-eigenvalue laboratory for the mixed local/nonlocal
// p-Laplacian with Dirichlet exterior condition.
//
//   plapmix run --config cfg.json [--out-dir DIR] [--verbose]
//   plapmix verify-formulas --r-omega V --r-j V
//   plapmix viscosity-check --config cfg.json [--out-dir DIR]
//
// Exit codes: 0 all requested verifications pass, 1 a verification failed,
// 2 config/parse error, 3 solver non-convergence.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plapmix/plapmix.hpp"

namespace {

int run_from_file(const std::string& config_path, const std::string& out_dir, bool verbose,
                  bool viscosity_only) {
    try {
        plapmix::RunConfig cfg = plapmix::load_config(config_path);
        if (viscosity_only) {
            cfg.task_solve = false;
            cfg.task_sweep = false;
            cfg.task_verify_formulas = false;
            cfg.task_viscosity = true;
        }
        plapmix::RunOutcome out = plapmix::run_config(cfg, out_dir, verbose);
        if (verbose) std::cerr << out.report.dump(2) << "\n";
        std::cout << (out.report["ok"].get<bool>() ? "ok" : "failed") << "\n";
        return out.exit_code();
    } catch (const plapmix::invalid_input& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const plapmix::resolution_error& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

// Formula-only shortcut on the symmetric interval (-r_omega, r_omega).
int verify_formulas_cmd(double r_omega, double r_j) {
    try {
        plapmix::RunConfig cfg;
        cfg.domain = plapmix::Domain::interval(-r_omega, r_omega);
        cfg.r_j = r_j;
        cfg.h = std::min(r_j / 32.0, r_omega / 16.0);
        cfg.p_list = {2.0};
        cfg.task_verify_formulas = true;
        cfg.out_dir = "out";
        plapmix::RunOutcome out = plapmix::run_config(cfg, "", false);
        std::cout << out.report["results"]["verify_formulas"].dump(2) << "\n";
        return out.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixed local/nonlocal p-Laplacian eigenvalue laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool verbose = false;

    CLI::App* run = app.add_subcommand("run", "run the tasks in a config file");
    run->add_option("--config", config_path, "config JSON path")->required();
    run->add_option("--out-dir", out_dir, "output directory (overrides config)");
    run->add_flag("--verbose", verbose, "log per-iteration traces and the report");

    double r_omega = 0, r_j = 0;
    CLI::App* vf = app.add_subcommand("verify-formulas",
                                      "limit-constant checks for one (r_omega, r_j) pair");
    vf->add_option("--r-omega", r_omega, "inradius")->required();
    vf->add_option("--r-j", r_j, "kernel support radius")->required();

    CLI::App* vc = app.add_subcommand("viscosity-check",
                                      "run only the viscosity-check task of a config");
    vc->add_option("--config", config_path, "config JSON path")->required();
    vc->add_option("--out-dir", out_dir, "output directory (overrides config)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_from_file(config_path, out_dir, verbose, false);
    if (vf->parsed()) return verify_formulas_cmd(r_omega, r_j);
    if (vc->parsed()) return run_from_file(config_path, out_dir, false, true);
    return 2;
}
