#pragma once

// Radial interaction kernels with compact support and the midpoint
// quadrature weights used by the nonlocal energy.  Kernels are normalized to
// unit mass; the discrete weight table is renormalized to sum exactly to 1 so
// the nonlocal sums see a unit-mass kernel at every resolution.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "plapmix/errors.hpp"
#include "plapmix/geometry.hpp"

namespace plapmix {

enum class Profile { Tent, Bump, TruncatedQuadratic };

inline const char* profile_name(Profile p) {
    switch (p) {
        case Profile::Tent: return "tent";
        case Profile::Bump: return "bump";
        case Profile::TruncatedQuadratic: return "truncated-quadratic";
    }
    return "?";
}

namespace detail {

// Shape on the unit radius, before normalization.
inline double profile_shape(Profile p, double r) {
    if (r >= 1.0) return 0.0;
    switch (p) {
        case Profile::Tent: return 1.0 - r;
        case Profile::Bump: return std::exp(-1.0 / (1.0 - r * r));
        case Profile::TruncatedQuadratic: return 1.0 - r * r;
    }
    return 0.0;
}

// Composite Simpson on [0,1]; the profiles are smooth there.
template <class F>
double simpson01(F f) {
    const int n = 1 << 12;
    double sum = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
    return sum / (3.0 * n);
}

} // namespace detail

struct Kernel {
    Profile profile = Profile::Tent;
    double r_j = 1.0;  // support radius: zero outside the closed ball of this radius
    int dim = 1;
    double norm_const = 1.0;

    static Kernel make(Profile p, double r_j, int dim) {
        if (!(r_j > 0)) throw invalid_input("kernel requires r_j > 0");
        if (dim != 1 && dim != 2) throw invalid_input("kernel dim must be 1 or 2");
        Kernel k;
        k.profile = p;
        k.r_j = r_j;
        k.dim = dim;
        double shape_integral;  // int_0^1 shape(r) r^{dim-1} dr
        switch (p) {
            case Profile::Tent:
                shape_integral = dim == 1 ? 0.5 : 1.0 / 6.0;
                break;
            case Profile::TruncatedQuadratic:
                shape_integral = dim == 1 ? 2.0 / 3.0 : 0.25;
                break;
            case Profile::Bump:
                shape_integral = detail::simpson01([&](double r) {
                    return detail::profile_shape(p, r) * (dim == 1 ? 1.0 : r);
                });
                break;
        }
        double mass_per_const = dim == 1 ? 2.0 * r_j * shape_integral
                                         : 2.0 * std::numbers::pi * r_j * r_j * shape_integral;
        k.norm_const = 1.0 / mass_per_const;
        return k;
    }

    double evaluate_radial(double r) const {
        if (r > r_j) return 0.0;
        return norm_const * detail::profile_shape(profile, r / r_j);
    }
    double evaluate(Point displacement) const { return evaluate_radial(norm(displacement)); }
};

// One lattice displacement: integer step, its length, and its share of the
// unit-mass quadrature.  Offsets run over the full closed ball |d| <= r_j,
// including the center and zero-weight entries on the support edge.
struct Offset {
    int di = 0;
    int dj = 0;
    double dist = 0;
    double weight = 0;
};

struct WeightTable {
    double h = 0;
    int dim = 1;
    double r_j = 0;
    double raw_sum = 0;  // midpoint-rule mass before renormalization
    std::vector<Offset> offsets;
};

inline WeightTable make_weight_table(const Kernel& k, double h) {
    if (!(h > 0)) throw invalid_input("weight table requires h > 0");
    if (h > k.r_j / 4.0) throw resolution_error("grid spacing exceeds r_j / 4");
    WeightTable t;
    t.h = h;
    t.dim = k.dim;
    t.r_j = k.r_j;
    const double r2_tol = k.r_j * k.r_j * (1.0 + 4e-12);
    const int m = static_cast<int>(std::floor(k.r_j / h)) + 1;
    const double cell = k.dim == 1 ? h : h * h;
    for (int di = -m; di <= m; ++di) {
        int jm = k.dim == 1 ? 0 : m;
        for (int dj = -jm; dj <= jm; ++dj) {
            double dx = di * h, dy = dj * h;
            if (dx * dx + dy * dy > r2_tol) continue;
            Offset o;
            o.di = di;
            o.dj = dj;
            o.dist = std::hypot(dx, dy);
            o.weight = k.evaluate_radial(o.dist) * cell;
            t.raw_sum += o.weight;
            t.offsets.push_back(o);
        }
    }
    if (!(t.raw_sum > 0)) throw resolution_error("quadrature weights sum to zero");
    for (Offset& o : t.offsets) o.weight /= t.raw_sum;
    return t;
}

} // namespace plapmix
