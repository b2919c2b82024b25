#pragma once

// First Dirichlet eigenpair of the mixed energy by projected gradient
// descent on the Rayleigh quotient.  The quotient is 0-homogeneous, so
// renormalizing to ||u||_p = 1 after each step never changes its value; the
// positivity clamp is the projection onto the cone the first eigenfunction
// lives in.  Steps are Barzilai-Borwein seeded and backtracked until the
// accepted quotient is nonincreasing.

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapmix/energy.hpp"
#include "plapmix/errors.hpp"
#include "plapmix/grid.hpp"
#include "plapmix/kernel.hpp"

namespace plapmix {

enum class InitKind { BoundaryDistance, Uniform };

struct SolverOptions {
    double tol_lambda = 1e-10;  // relative quotient drop, trailing window
    double tol_grad = 1e-8;     // scale-free projected-gradient metric
    int max_iters = 0;          // 0: 200 * number of interior nodes
    double step_init = 1.0;
    double step_shrink = 0.5;
    double armijo_c = 1e-4;
    InitKind init = InitKind::BoundaryDistance;
    bool continuation = true;  // ladder cold starts up through doubling p
    int trace_every = 0;       // keep every n-th iterate in the trace; 0 = none
};

struct IterSample {
    int iter = 0;
    double lambda_root = 0;
    double rel_change = 0;
    double grad_metric = 0;
    double step = 0;
};

struct EigenReport {
    double p = 2, alpha = 1, beta = 1;
    double lambda1 = 0;       // exp(log_lambda1); may underflow for large p
    double log_lambda1 = 0;
    double lambda1_root = 0;  // lambda1^{1/p}
    ScalarField field;        // ||field||_p = 1, positive on the interior
    int iters = 0;
    double final_rel_change = 0;
    double final_grad_metric = 0;
    bool converged = false;
    std::string message;
    double wall_seconds = 0;  // not part of serialized reports
    std::vector<IterSample> trace;
};

struct solve_error : std::runtime_error {
    EigenReport best;
    solve_error(const std::string& msg, EigenReport r)
        : std::runtime_error(msg), best(std::move(r)) {}
};

namespace detail {

inline void normalize_p(const Grid& g, ScalarField& u, double p) {
    double n = p_norm(g, u, p);
    if (n == 0.0) throw undefined_quotient("cannot normalize a zero field");
    for (int id : g.interior) u.v[id] /= n;
}

inline ScalarField initial_field(const Grid& g, InitKind kind, double p) {
    ScalarField u = zero_field(g);
    for (int id : g.interior)
        u.v[id] = kind == InitKind::BoundaryDistance ? std::max(g.bdist[id], 0.0) : 1.0;
    normalize_p(g, u, p);
    return u;
}

struct DescentState {
    double lambda = 0;
    double log_lambda = 0;
    int iters = 0;
    double rel_change = 0;
    double grad_metric = 0;
    bool converged = false;
    std::string message;
};

// One descent run at fixed p.  u enters normalized and positive, leaves at
// the best iterate found.
inline DescentState descend(const Grid& g, const WeightTable& wt, double p,
                            double alpha, double beta, ScalarField& u,
                            double tol_lambda, double tol_grad, int max_iters,
                            const SolverOptions& opts, std::vector<IterSample>* trace) {
    DescentState st;
    const double tiny = 1e-300;
    LogNonneg lam_log = rayleigh_log(g, u, p, alpha, beta, wt);
    if (lam_log.zero) throw undefined_quotient("zero Rayleigh quotient");
    st.log_lambda = lam_log.log_value;
    st.lambda = lam_log.value();

    int n = static_cast<int>(g.interior.size());
    std::vector<double> pg(n, 0.0), pg_prev, u_prev;
    int calm = 0;
    int restarts = 0;
    double restart_log_lambda = st.log_lambda;

    for (int iter = 1; iter <= max_iters; ++iter) {
        ScalarField gE = energy_gradient(g, u, p, alpha, beta, wt);
        ScalarField gN = norm_gradient(g, u, p);
        double pg2 = 0, u2 = 0;
        for (int k = 0; k < n; ++k) {
            int id = g.interior[k];
            double gr = gE.v[id] - st.lambda * gN.v[id];
            if (u.v[id] <= 0.0 && gr > 0.0) gr = 0.0;  // clamped node, outward pull
            pg[k] = gr;
            pg2 += gr * gr;
            u2 += u.v[id] * u.v[id];
        }
        double pg_norm = std::sqrt(pg2);
        double u_norm = std::sqrt(u2);
        st.grad_metric = pg_norm * u_norm / (p * std::max(st.lambda, tiny));
        st.iters = iter;

        if (pg_norm == 0.0) {
            st.converged = true;
            st.message = "projected gradient vanished";
            break;
        }

        // Step seed: BB2 from the last accepted move, else a move of
        // relative size step_init.
        double tau_scale = u_norm / pg_norm;
        double tau = -1.0;
        if (!u_prev.empty()) {
            double ss = 0, sy = 0;
            for (int k = 0; k < n; ++k) {
                int id = g.interior[k];
                double s = u.v[id] - u_prev[k];
                double y = pg[k] - pg_prev[k];
                ss += s * s;
                sy += s * y;
            }
            if (sy > 0.0 && ss > 0.0) tau = std::min(ss / sy, 1e6 * tau_scale);
        }
        if (tau <= 0.0) tau = opts.step_init * tau_scale;
        tau = std::max(tau, 1e-14 * tau_scale);

        u_prev.resize(n);
        for (int k = 0; k < n; ++k) u_prev[k] = u.v[g.interior[k]];
        pg_prev = pg;

        ScalarField u_try = u;
        LogNonneg lam_try_log;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            bool any = false;
            for (int k = 0; k < n; ++k) {
                int id = g.interior[k];
                double v = u.v[id] - tau * pg[k];
                u_try.v[id] = v > 0.0 ? v : 0.0;
                any = any || u_try.v[id] > 0.0;
            }
            if (any) {
                lam_try_log = rayleigh_log(g, u_try, p, alpha, beta, wt);
                double lam_try = lam_try_log.value();
                if (lam_try <= st.lambda - opts.armijo_c * tau * pg2 ||
                    (bt >= 20 && lam_try < st.lambda)) {
                    accepted = true;
                    break;
                }
            }
            tau *= opts.step_shrink;
        }
        if (!accepted) {
            st.converged = calm >= 1 || st.grad_metric <= tol_grad * 1e3;
            st.message = st.converged ? "stalled at numerical floor" : "no descent step found";
            break;
        }

        normalize_p(g, u_try, p);
        double lam_prev = st.lambda;
        u = u_try;
        lam_try_log = rayleigh_log(g, u, p, alpha, beta, wt);
        st.lambda = lam_try_log.value();
        st.log_lambda = lam_try_log.log_value;

        st.rel_change = (lam_prev - st.lambda) / std::max(st.lambda, tiny);
        if (st.rel_change < 0) st.rel_change = 0;
        calm = st.rel_change < tol_lambda ? calm + 1 : 0;

        if (trace && opts.trace_every > 0 &&
            (iter % opts.trace_every == 0 || iter == 1)) {
            trace->push_back({iter, std::exp(st.log_lambda / p), st.rel_change,
                              st.grad_metric, tau});
        }

        if (calm >= 3 && st.grad_metric <= tol_grad) {
            st.converged = true;
            st.message = "tolerances met";
            break;
        }
        if (calm >= 25) {
            // Plateau: drop the BB memory and take a fresh seed; flat
            // large-p landscapes often resume descending.  Keep restarting
            // while a full cycle still gains more than the calm window
            // could have hidden, up to a hard cap.
            bool gained = restart_log_lambda - st.log_lambda > 5.0 * tol_lambda;
            if (restarts < 60 && (restarts == 0 || gained)) {
                ++restarts;
                restart_log_lambda = st.log_lambda;
                u_prev.clear();
                pg_prev.clear();
                calm = 0;
                continue;
            }
            st.converged = true;
            st.message = "quotient stagnant";
            break;
        }
    }
    if (!st.converged && st.message.empty()) st.message = "max_iters reached";
    return st;
}

} // namespace detail

// Smallest eigenvalue and positive eigenfield.  warm, when given, seeds the
// iteration (it is renormalized first).  Throws solve_error carrying the
// best iterate if max_iters runs out.
inline EigenReport solve_first(const Grid& g, const WeightTable& wt, double p,
                               double alpha, double beta,
                               const SolverOptions& opts = {},
                               const ScalarField* warm = nullptr) {
    if (!(p >= 2)) throw invalid_input("solver requires p >= 2");
    if (alpha < 0 || beta < 0 || (alpha == 0 && beta == 0))
        throw invalid_input("weights must be nonnegative and not both zero");
    auto t0 = std::chrono::steady_clock::now();

    EigenReport rep;
    rep.p = p;
    rep.alpha = alpha;
    rep.beta = beta;

    ScalarField u;
    if (warm) {
        u = *warm;
        enforce_zero_exterior(g, u);
        for (int id : g.interior) u.v[id] = std::max(u.v[id], 0.0);
        detail::normalize_p(g, u, p);
    } else {
        u = detail::initial_field(g, opts.init, p);
    }

    int n = static_cast<int>(g.interior.size());
    int budget = opts.max_iters > 0 ? opts.max_iters : 200 * n;

    // Cold starts at large p walk through doubling exponents; each rung is a
    // cheap approximate solve that seeds the next.
    if (!warm && opts.continuation && p > 8.0) {
        for (double q = 4.0; q < p; q = std::min(2.0 * q, p)) {
            detail::descend(g, wt, q, alpha, beta, u, opts.tol_lambda * 1e4,
                            opts.tol_grad * 1e4, budget / 4, opts, nullptr);
            detail::normalize_p(g, u, std::min(2.0 * q, p));
            if (2.0 * q >= p) break;
        }
    }

    std::vector<IterSample> trace;
    detail::DescentState st =
        detail::descend(g, wt, p, alpha, beta, u, opts.tol_lambda, opts.tol_grad,
                        budget, opts, opts.trace_every > 0 ? &trace : nullptr);

    detail::normalize_p(g, u, p);
    LogNonneg lam = rayleigh_log(g, u, p, alpha, beta, wt);
    rep.field = u;
    rep.log_lambda1 = lam.log_value;
    rep.lambda1 = lam.value();
    rep.lambda1_root = std::exp(lam.log_value / p);
    rep.iters = st.iters;
    rep.final_rel_change = st.rel_change;
    rep.final_grad_metric = st.grad_metric;
    rep.converged = st.converged;
    rep.message = st.message;
    rep.trace = std::move(trace);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!st.converged) throw solve_error("eigensolve did not converge: " + st.message, rep);
    return rep;
}

// Solves along p_list in order, warm-starting each entry from the previous
// field.  Non-convergence is recorded per entry, not thrown.
inline std::vector<EigenReport> sweep_p(const Grid& g, const WeightTable& wt,
                                        const std::vector<double>& p_list,
                                        double alpha, double beta,
                                        const SolverOptions& opts = {}) {
    std::vector<EigenReport> out;
    const ScalarField* warm = nullptr;
    for (double p : p_list) {
        try {
            out.push_back(solve_first(g, wt, p, alpha, beta, opts, warm));
        } catch (const solve_error& e) {
            out.push_back(e.best);
        }
        warm = &out.back().field;
    }
    return out;
}

} // namespace plapmix
