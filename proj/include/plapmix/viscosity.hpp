#pragma once

// Pointwise residual of the limit equation max{M1, M2} = 0 with
//   M1 = min{ -Lambda u - L-,  -(L+ + L-),  -L- - |grad u| }
//   M2 = min{ |grad u| - Lambda u,  -A_inf u,  |grad u| - L+,  |grad u| + L- }
// where L+/L- are the sup/inf of u(y) - u(x) over |y - x| <= r_j and A_inf
// is the infinity Laplacian <D^2 u grad u, grad u>.  Stencils here are
// centered, deliberately decoupled from the forward differences the energy
// uses.

#include <cmath>
#include <optional>
#include <vector>

#include "plapmix/errors.hpp"
#include "plapmix/grid.hpp"

namespace plapmix {

// sup and inf of u(y) - u(x) over lattice nodes y with |y - x| <= r_j; the
// node itself participates, so sup >= 0 >= inf.
inline std::pair<double, double> nonlocal_sup_inf(const Grid& g, const ScalarField& u,
                                                  double r_j, int node) {
    const double r2_tol = r_j * r_j * (1.0 + 4e-12);
    const int m = static_cast<int>(std::floor(r_j / g.h)) + 1;
    int i = node % g.nx, j = node / g.nx;
    double ux = u.v[node];
    double hi = 0, lo = 0;
    int jm = g.dim == 1 ? 0 : m;
    for (int dj = -jm; dj <= jm; ++dj) {
        for (int di = -m; di <= m; ++di) {
            double dx = di * g.h, dy = dj * g.h;
            if (dx * dx + dy * dy > r2_tol) continue;
            int ii = i + di, jj = j + dj;
            double uy = g.in_lattice(ii, jj) ? u.v[g.index(ii, jj)] : 0.0;
            hi = std::max(hi, uy - ux);
            lo = std::min(lo, uy - ux);
        }
    }
    return {hi, lo};
}

// Centered gradient; nullopt when a stencil neighbor is off the lattice.
inline std::optional<Point> centered_gradient(const Grid& g, const ScalarField& u, int node) {
    int i = node % g.nx, j = node / g.nx;
    if (!g.in_lattice(i - 1, j) || !g.in_lattice(i + 1, j)) return std::nullopt;
    Point grad;
    grad.x = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) / (2 * g.h);
    if (g.dim == 2) {
        if (!g.in_lattice(i, j - 1) || !g.in_lattice(i, j + 1)) return std::nullopt;
        grad.y = (u.v[g.index(i, j + 1)] - u.v[g.index(i, j - 1)]) / (2 * g.h);
    }
    return grad;
}

// <D^2 u grad u, grad u> from centered second differences.
inline std::optional<double> infinity_laplacian(const Grid& g, const ScalarField& u, int node) {
    int i = node % g.nx, j = node / g.nx;
    if (!g.in_lattice(i - 1, j) || !g.in_lattice(i + 1, j)) return std::nullopt;
    double h2 = g.h * g.h;
    double uc = u.v[node];
    double ux = (u.v[g.index(i + 1, j)] - u.v[g.index(i - 1, j)]) / (2 * g.h);
    double uxx = (u.v[g.index(i + 1, j)] - 2 * uc + u.v[g.index(i - 1, j)]) / h2;
    if (g.dim == 1) return ux * ux * uxx;
    if (!g.in_lattice(i - 1, j - 1) || !g.in_lattice(i + 1, j + 1) ||
        !g.in_lattice(i + 1, j - 1) || !g.in_lattice(i - 1, j + 1))
        return std::nullopt;
    double uy = (u.v[g.index(i, j + 1)] - u.v[g.index(i, j - 1)]) / (2 * g.h);
    double uyy = (u.v[g.index(i, j + 1)] - 2 * uc + u.v[g.index(i, j - 1)]) / h2;
    double uxy = (u.v[g.index(i + 1, j + 1)] - u.v[g.index(i + 1, j - 1)] -
                  u.v[g.index(i - 1, j + 1)] + u.v[g.index(i - 1, j - 1)]) /
                 (4 * h2);
    return ux * ux * uxx + 2 * ux * uy * uxy + uy * uy * uyy;
}

inline double branch_m1(double u, double lambda, double sup_disp, double inf_disp,
                        double grad_mag) {
    double a = -lambda * u - inf_disp;
    double b = -(sup_disp + inf_disp);
    double c = -inf_disp - grad_mag;
    return std::min(a, std::min(b, c));
}

inline double branch_m2(double u, double lambda, double grad_mag, double inf_lap,
                        double sup_disp, double inf_disp) {
    double a = grad_mag - lambda * u;
    double b = -inf_lap;
    double c = grad_mag - sup_disp;
    double d = grad_mag + inf_disp;
    return std::min(std::min(a, b), std::min(c, d));
}

struct NodeResidual {
    int node = 0;
    Point x{};
    double u = 0;
    double sup_disp = 0, inf_disp = 0;
    double grad_mag = 0;
    double inf_lap = 0;
    double m1 = 0, m2 = 0;
    double residual = 0;   // max{m1, m2}
    bool degenerate = false;  // |grad u| below the gradient floor
    bool robust = false;      // dist to the boundary > 2h
};

struct ViscosityResidual {
    std::vector<NodeResidual> nodes;  // one row per interior node with full stencils
    int skipped = 0;                  // interior nodes lacking stencil neighbors
    int robust_count = 0;
    double sup_residual_robust = 0;   // sup |max{M1, M2}| over robust nodes
    double mean_abs_residual_robust = 0;
};

// Expects the field rescaled to ||u||_inf = 1; lambda is the limit constant
// the equation is tested against.
inline ViscosityResidual residual_report(const Grid& g, const ScalarField& u,
                                         double r_j, double lambda) {
    ViscosityResidual out;
    double grad_floor = 1e-6 * sup_norm(g, u) / g.inr.r_omega;
    double sum_abs = 0;
    for (int id : g.interior) {
        auto grad = centered_gradient(g, u, id);
        auto lap = infinity_laplacian(g, u, id);
        if (!grad || !lap) {
            ++out.skipped;
            continue;
        }
        NodeResidual r;
        r.node = id;
        r.x = g.point(id);
        r.u = u.v[id];
        auto [hi, lo] = nonlocal_sup_inf(g, u, r_j, id);
        r.sup_disp = hi;
        r.inf_disp = lo;
        r.grad_mag = norm(*grad);
        r.inf_lap = *lap;
        r.m1 = branch_m1(r.u, lambda, hi, lo, r.grad_mag);
        r.m2 = branch_m2(r.u, lambda, r.grad_mag, r.inf_lap, hi, lo);
        r.residual = std::max(r.m1, r.m2);
        r.degenerate = r.grad_mag < grad_floor;
        r.robust = g.bdist[id] > 2 * g.h;
        if (r.robust) {
            ++out.robust_count;
            out.sup_residual_robust = std::max(out.sup_residual_robust, std::abs(r.residual));
            sum_abs += std::abs(r.residual);
        }
        out.nodes.push_back(r);
    }
    if (out.robust_count > 0) out.mean_abs_residual_robust = sum_abs / out.robust_count;
    return out;
}

} // namespace plapmix
