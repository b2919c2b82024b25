#pragma once

// The p -> infinity landscape: the geometric constant Lambda determined by
// (R_Omega, R_J) through the decomposition R_Omega = K R_J + b, the
// sup-norm quotient max{ ||grad u||_inf, [u]_J } / ||u||_inf it minimizes,
// and the radial profiles that attain it case by case.
//
//   [u]_J = sup { |u(x) - u(y)| : |x - y| <= R_J },  u = 0 off the domain.

#include <cmath>
#include <optional>
#include <vector>

#include "plapmix/energy.hpp"
#include "plapmix/errors.hpp"
#include "plapmix/grid.hpp"

namespace plapmix {

enum class LambdaTag { BZero, SmallRjOrK0, BigRjBGe1, BigRjBLt1 };

inline const char* lambda_tag_name(LambdaTag t) {
    switch (t) {
        case LambdaTag::BZero: return "b-zero";
        case LambdaTag::SmallRjOrK0: return "small-rj-or-k0";
        case LambdaTag::BigRjBGe1: return "big-rj-b-ge-1";
        case LambdaTag::BigRjBLt1: return "big-rj-b-lt-1";
    }
    return "?";
}

struct LambdaCase {
    LambdaTag tag = LambdaTag::BZero;
    double lambda = 0;
    double r_omega = 0;
    double r_j = 0;
    int k_omega = 0;
    double b = 0;
};

// Four mutually exclusive cases:
//   b = 0                         Lambda = max{1/R_Omega, 1/K}
//   K = 0, or b != 0 and R_J <= 1 Lambda = max{1/R_Omega, 1/(K+1)}
//   K > 0, R_J > 1, b >= 1        Lambda = 1/(K+1)
//   K > 0, R_J > 1, 0 < b < 1     Lambda = 1/(K+b)
inline LambdaCase lambda_formula(double r_omega, double r_j, int k_omega, double b) {
    if (!(r_omega > 0) || !(r_j > 0)) throw invalid_input("lambda_formula requires positive radii");
    if (k_omega < 0 || b < 0 || b >= r_j) throw invalid_input("decomposition out of range");
    if (k_omega == 0 && b == 0) throw invalid_input("decomposition is identically zero");
    if (std::abs(r_omega - (k_omega * r_j + b)) > 1e-9 * std::max(r_omega, r_j))
        throw invalid_input("decomposition inconsistent with r_omega");

    LambdaCase c;
    c.r_omega = r_omega;
    c.r_j = r_j;
    c.k_omega = k_omega;
    c.b = b;
    if (b == 0.0) {
        c.tag = LambdaTag::BZero;
        c.lambda = std::max(1.0 / r_omega, 1.0 / k_omega);
    } else if (k_omega == 0 || r_j <= 1.0) {
        c.tag = LambdaTag::SmallRjOrK0;
        c.lambda = std::max(1.0 / r_omega, 1.0 / (k_omega + 1));
    } else if (b >= 1.0) {
        c.tag = LambdaTag::BigRjBGe1;
        c.lambda = 1.0 / (k_omega + 1);
    } else {
        c.tag = LambdaTag::BigRjBLt1;
        c.lambda = 1.0 / (k_omega + b);
    }
    return c;
}

inline LambdaCase lambda_for(double r_omega, double r_j) {
    auto [k, b] = decompose(r_omega, r_j);
    return lambda_formula(r_omega, r_j, k, b);
}

// sup |u(x) - u(y)| over lattice pairs at distance <= r_j; pairs with both
// values zero cannot raise the sup, so scanning active nodes suffices.
inline double j_seminorm(const Grid& g, const ScalarField& u, double r_j) {
    const double r2_tol = r_j * r_j * (1.0 + 4e-12);
    const int m = static_cast<int>(std::floor(r_j / g.h)) + 1;
    struct Step { int di, dj; };
    std::vector<Step> half;
    for (int di = 0; di <= m; ++di) {
        int j_lo = g.dim == 1 ? 0 : (di == 0 ? 1 : -m);
        int j_hi = g.dim == 1 ? 0 : m;
        if (di == 0 && g.dim == 1) continue;
        for (int dj = j_lo; dj <= j_hi; ++dj) {
            if (di == 0 && dj <= 0) continue;
            double dx = di * g.h, dy = dj * g.h;
            if (dx * dx + dy * dy > r2_tol) continue;
            half.push_back({di, dj});
        }
    }
    double best = 0;
    for (int id : g.active) {
        int i = id % g.nx, j = id / g.nx;
        double ux = u.v[id];
        for (const Step& s : half) {
            int ii = i + s.di, jj = j + s.dj;
            double uy = g.in_lattice(ii, jj) ? u.v[g.index(ii, jj)] : 0.0;
            best = std::max(best, std::abs(ux - uy));
        }
    }
    return best;
}

// Max forward-difference cell gradient magnitude, cells straddling the
// boundary included (their outside values are zero).
inline double sup_grad(const Grid& g, const ScalarField& u) {
    double m2 = 0;
    detail::for_each_cell_gradient(g, u, [&](double gx, double gy) {
        m2 = std::max(m2, gx * gx + gy * gy);
    });
    return std::sqrt(m2);
}

struct InfQuotient {
    double sup_grad = 0;
    double j_seminorm = 0;
    double sup_norm = 0;
    double quotient = 0;
};

inline InfQuotient inf_quotient(const Grid& g, const ScalarField& u, double r_j) {
    InfQuotient q;
    q.sup_norm = sup_norm(g, u);
    if (q.sup_norm == 0.0) throw undefined_quotient("quotient of a zero field");
    q.sup_grad = plapmix::sup_grad(g, u);
    q.j_seminorm = plapmix::j_seminorm(g, u, r_j);
    q.quotient = std::max(q.sup_grad, q.j_seminorm) / q.sup_norm;
    return q;
}

// ---- radial extremal profiles ------------------------------------------

// Cone: 1 at the center, affine down to 0 at distance r_omega.
inline double cone_profile(double t, double r_omega) {
    return t >= r_omega ? 0.0 : (r_omega - t) / r_omega;
}

// Staircase for b > 0: alternating descents of width b and flats, K+1 equal
// drops of 1/(K+1) in total.
inline double staircase_profile(double t, double r_j, int k, double b) {
    if (!(k >= 1) || !(b > 0) || !(b < r_j)) throw invalid_input("staircase requires k >= 1, 0 < b < r_j");
    double r_omega = k * r_j + b;
    if (t >= r_omega) return 0.0;
    double kp1 = k + 1.0;
    if (t >= k * r_j) return (r_omega - t) / (kp1 * b);
    int i = static_cast<int>(std::floor(t / r_j));
    double s = t - i * r_j;
    if (s <= b) return 1.0 - i / kp1 - s / (kp1 * b);
    return 1.0 - (i + 1) / kp1;
}

// Sawtooth for 0 < b < 1 < r_j: steep unit-rate pieces of width b, shallow
// pieces filling each period, one drop of 1/(K+b) per period r_j.
inline double z_profile(double t, double r_j, int k, double b) {
    if (!(k >= 1) || !(b > 0) || !(b < 1) || !(r_j > 1))
        throw invalid_input("z profile requires k >= 1 and 0 < b < 1 < r_j");
    double r_omega = k * r_j + b;
    if (t >= r_omega) return 0.0;
    double den = k + b;
    if (t >= k * r_j) return (r_omega - t) / den;
    int i = static_cast<int>(std::floor(t / r_j));
    double s = t - i * r_j;
    double yi = 1.0 - i / den;
    if (s <= b) return yi - s / den;
    return yi - b / den - (1.0 - b) / (den * (r_j - b)) * (s - b);
}

template <class Profile1D>
ScalarField radial_field(const Grid& g, Point x0, Profile1D&& prof) {
    return sample_field(g, [&](Point p) { return prof(dist(p, x0)); });
}

inline ScalarField build_cone(const Grid& g, Point x0, double r_omega) {
    if (!(r_omega > 0)) throw invalid_input("cone requires r_omega > 0");
    return radial_field(g, x0, [&](double t) { return cone_profile(t, r_omega); });
}

inline ScalarField build_staircase(const Grid& g, Point x0, double r_j, int k, double b) {
    return radial_field(g, x0, [&](double t) { return staircase_profile(t, r_j, k, b); });
}

inline ScalarField build_profile_z(const Grid& g, Point x0, double r_j, int k, double b) {
    return radial_field(g, x0, [&](double t) { return z_profile(t, r_j, k, b); });
}

// ---- lower-bound verification -------------------------------------------

struct BoundCheck {
    bool ok = false;
    double margin = 0;    // quotient - Lambda; may be slightly negative on a grid
    double eps_grid = 0;  // admissible grid slack
    InfQuotient q;
};

// Checks quotient(u) >= Lambda - eps_grid with eps_grid = 2 * Lip * h
// measured against the sup-normalized field; Lip falls back to the observed
// sup_grad when no analytic constant is supplied.
inline BoundCheck verify_lower_bounds(const Grid& g, const ScalarField& u,
                                      const LambdaCase& c,
                                      std::optional<double> lip = std::nullopt) {
    BoundCheck r;
    r.q = inf_quotient(g, u, c.r_j);
    double lip_eff = lip.value_or(r.q.sup_grad);
    r.eps_grid = 2.0 * lip_eff * g.h / r.q.sup_norm;
    r.margin = r.q.quotient - c.lambda;
    r.ok = r.margin >= -r.eps_grid;
    return r;
}

} // namespace plapmix
