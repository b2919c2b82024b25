#pragma once

// Discrete mixed energy
//   E(u) = alpha * sum_cells |grad_h u|^p h^N
//        + beta  * sum_{x} sum_k w_k |u(x) - u(x + d_k)|^p h^N
// with forward-difference cell gradients and unit-mass quadrature weights.
// Accumulation factors out the largest difference, so values are carried as
// log-magnitudes and remain meaningful for large p.

#include <cmath>
#include <vector>

#include "plapmix/errors.hpp"
#include "plapmix/grid.hpp"
#include "plapmix/kernel.hpp"
#include "plapmix/numerics.hpp"

namespace plapmix {

struct EnergyParts {
    LogNonneg local;
    LogNonneg nonlocal;
};

namespace detail {

// Applies fn(gx, gy) to every forward-difference cell gradient.
template <class Fn>
void for_each_cell_gradient(const Grid& g, const ScalarField& u, Fn&& fn) {
    if (g.dim == 1) {
        for (int i = 0; i + 1 < g.nx; ++i) fn((u.v[i + 1] - u.v[i]) / g.h, 0.0);
        return;
    }
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            int id = g.index(i, j);
            fn((u.v[id + 1] - u.v[id]) / g.h, (u.v[id + g.nx] - u.v[id]) / g.h);
        }
    }
}

// Applies fn(x_id, offset, u(x) - u(y)) for every active node x and every
// nonzero offset; y values off the lattice read as zero.
template <class Fn>
void for_each_pair_difference(const Grid& g, const ScalarField& u, const WeightTable& wt, Fn&& fn) {
    for (int id : g.active) {
        int i = id % g.nx, j = id / g.nx;
        double ux = u.v[id];
        for (const Offset& o : wt.offsets) {
            if (o.di == 0 && o.dj == 0) continue;
            int ii = i + o.di, jj = j + o.dj;
            double uy = g.in_lattice(ii, jj) ? u.v[g.index(ii, jj)] : 0.0;
            if (ux == 0.0 && uy == 0.0) continue;
            fn(id, o, ux - uy);
        }
    }
}

} // namespace detail

inline LogNonneg local_energy_log(const Grid& g, const ScalarField& u, double p) {
    double m2 = 0;
    detail::for_each_cell_gradient(g, u, [&](double gx, double gy) {
        m2 = std::max(m2, gx * gx + gy * gy);
    });
    if (m2 == 0.0) return LogNonneg{};
    double m = std::sqrt(m2);
    double s = 0;
    detail::for_each_cell_gradient(g, u, [&](double gx, double gy) {
        double t = std::sqrt(gx * gx + gy * gy) / m;
        if (t > 0) s += std::pow(t, p);
    });
    return LogNonneg::from_log(p * std::log(m) + std::log(s) + std::log(g.cell_measure()));
}

inline LogNonneg nonlocal_energy_log(const Grid& g, const ScalarField& u, double p,
                                     const WeightTable& wt) {
    double m = 0;
    detail::for_each_pair_difference(g, u, wt, [&](int, const Offset&, double d) {
        m = std::max(m, std::abs(d));
    });
    if (m == 0.0) return LogNonneg{};
    double s = 0;
    detail::for_each_pair_difference(g, u, wt, [&](int, const Offset& o, double d) {
        double t = std::abs(d) / m;
        if (t > 0 && o.weight > 0) s += o.weight * std::pow(t, p);
    });
    if (s == 0.0) return LogNonneg{};
    return LogNonneg::from_log(p * std::log(m) + std::log(s) + std::log(g.cell_measure()));
}

inline double local_energy(const Grid& g, const ScalarField& u, double p) {
    return local_energy_log(g, u, p).value();
}

inline double nonlocal_energy(const Grid& g, const ScalarField& u, double p,
                              const WeightTable& wt) {
    return nonlocal_energy_log(g, u, p, wt).value();
}

inline EnergyParts energy_parts(const Grid& g, const ScalarField& u, double p,
                                const WeightTable& wt, double alpha, double beta) {
    EnergyParts e;
    if (alpha != 0.0) e.local = local_energy_log(g, u, p);
    if (beta != 0.0) e.nonlocal = nonlocal_energy_log(g, u, p, wt);
    return e;
}

inline LogNonneg total_energy_log(const EnergyParts& e, double alpha, double beta) {
    return log_add(log_scale(e.local, alpha), log_scale(e.nonlocal, beta));
}

// log ||u||_p^p over the interior.
inline LogNonneg p_norm_pow_log(const Grid& g, const ScalarField& u, double p) {
    double m = sup_norm(g, u);
    if (m == 0.0) return LogNonneg{};
    double s = 0;
    for (int id : g.interior) {
        double t = std::abs(u.v[id]) / m;
        if (t > 0) s += std::pow(t, p);
    }
    return LogNonneg::from_log(p * std::log(m) + std::log(s) + std::log(g.cell_measure()));
}

inline LogNonneg rayleigh_log(const Grid& g, const ScalarField& u, double p,
                              double alpha, double beta, const WeightTable& wt) {
    LogNonneg den = p_norm_pow_log(g, u, p);
    if (den.zero) throw undefined_quotient("rayleigh quotient of a zero field");
    LogNonneg num = total_energy_log(energy_parts(g, u, p, wt, alpha, beta), alpha, beta);
    if (num.zero) return LogNonneg{};
    return LogNonneg::from_log(num.log_value - den.log_value);
}

inline double rayleigh(const Grid& g, const ScalarField& u, double p,
                       double alpha, double beta, const WeightTable& wt) {
    return rayleigh_log(g, u, p, alpha, beta, wt).value();
}

// lambda^{1/p}, evaluated in log form.
inline double rayleigh_root(const Grid& g, const ScalarField& u, double p,
                            double alpha, double beta, const WeightTable& wt) {
    LogNonneg q = rayleigh_log(g, u, p, alpha, beta, wt);
    return q.zero ? 0.0 : std::exp(q.log_value / p);
}

// d/du of the mixed energy; rows for band and exterior nodes are zero, they
// are not degrees of freedom.
inline ScalarField energy_gradient(const Grid& g, const ScalarField& u, double p,
                                   double alpha, double beta, const WeightTable& wt) {
    ScalarField grad = zero_field(g);
    double hN = g.cell_measure();

    if (alpha != 0.0) {
        double m2 = 0;
        detail::for_each_cell_gradient(g, u, [&](double gx, double gy) {
            m2 = std::max(m2, gx * gx + gy * gy);
        });
        if (m2 > 0) {
            double m = std::sqrt(m2);
            std::vector<double> acc(g.size(), 0.0);
            auto cell = [&](int id_base, int id_x, int id_y) {
                double gx = (u.v[id_x] - u.v[id_base]) / g.h;
                double gy = id_y < 0 ? 0.0 : (u.v[id_y] - u.v[id_base]) / g.h;
                double mag = std::sqrt(gx * gx + gy * gy);
                if (mag == 0.0) return;
                double f = std::pow(mag / m, p - 2.0);
                double tx = f * (gx / m), ty = f * (gy / m);
                acc[id_base] -= tx + ty;
                acc[id_x] += tx;
                if (id_y >= 0) acc[id_y] += ty;
            };
            if (g.dim == 1) {
                for (int i = 0; i + 1 < g.nx; ++i) cell(i, i + 1, -1);
            } else {
                for (int j = 0; j + 1 < g.ny; ++j)
                    for (int i = 0; i + 1 < g.nx; ++i) {
                        int id = g.index(i, j);
                        cell(id, id + 1, id + g.nx);
                    }
            }
            double scale = alpha * p * std::exp((p - 1.0) * std::log(m)) * hN / g.h;
            for (int id : g.interior) grad.v[id] += scale * acc[id];
        }
    }

    if (beta != 0.0) {
        double m = 0;
        for (int id : g.interior) {
            int i = id % g.nx, j = id / g.nx;
            for (const Offset& o : wt.offsets) {
                if (o.di == 0 && o.dj == 0) continue;
                int ii = i + o.di, jj = j + o.dj;
                double uy = g.in_lattice(ii, jj) ? u.v[g.index(ii, jj)] : 0.0;
                m = std::max(m, std::abs(u.v[id] - uy));
            }
        }
        if (m > 0) {
            double scale = beta * 2.0 * p * std::exp((p - 1.0) * std::log(m)) * hN;
            for (int id : g.interior) {
                int i = id % g.nx, j = id / g.nx;
                double acc = 0;
                for (const Offset& o : wt.offsets) {
                    if (o.di == 0 && o.dj == 0) continue;
                    if (o.weight == 0.0) continue;
                    int ii = i + o.di, jj = j + o.dj;
                    double uy = g.in_lattice(ii, jj) ? u.v[g.index(ii, jj)] : 0.0;
                    double d = u.v[id] - uy;
                    if (d == 0.0) continue;
                    double t = std::abs(d) / m;
                    acc += o.weight * std::pow(t, p - 1.0) * (d > 0 ? 1.0 : -1.0);
                }
                grad.v[id] += scale * acc;
            }
        }
    }
    return grad;
}

// d/du of ||u||_p^p (the Rayleigh denominator), zero off the interior.
inline ScalarField norm_gradient(const Grid& g, const ScalarField& u, double p) {
    ScalarField grad = zero_field(g);
    double hN = g.cell_measure();
    for (int id : g.interior) {
        double v = u.v[id];
        if (v == 0.0) continue;
        grad.v[id] = p * std::pow(std::abs(v), p - 1.0) * (v > 0 ? 1.0 : -1.0) * hN;
    }
    return grad;
}

} // namespace plapmix
