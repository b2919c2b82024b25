#pragma once

// Uniform lattice covering the domain plus a collar one kernel radius wide.
// Nodes are classified interior (in Omega), band (within r_j of Omega), or
// exterior.  Fields live on the lattice and vanish off the interior; the
// band carries the zero values the nonlocal terms see across the boundary.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "plapmix/errors.hpp"
#include "plapmix/geometry.hpp"

namespace plapmix {

enum class NodeClass : std::uint8_t { Interior, Band, Exterior };

struct Grid {
    int dim = 1;
    double h = 0;
    double r_j = 0;
    Domain domain;
    InradiusData inr;
    Point origin{};  // coordinates of node (0, 0); the inradius center is a node
    int nx = 0;
    int ny = 1;
    int center_i = 0;  // lattice index of the inradius center
    int center_j = 0;
    std::vector<NodeClass> mask;
    std::vector<double> bdist;  // signed boundary distance per node
    std::vector<int> interior;
    std::vector<int> active;  // interior + band, ascending

    int size() const { return nx * ny; }
    int index(int i, int j) const { return i + nx * j; }
    bool in_lattice(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    Point point(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
    Point point(int flat) const { return point(flat % nx, flat / nx); }
    NodeClass node_class(int flat) const { return mask[flat]; }
    bool is_interior(int flat) const { return mask[flat] == NodeClass::Interior; }
    double cell_measure() const { return dim == 1 ? h : h * h; }
};

inline Grid make_grid(const Domain& domain, const InradiusData& inr, double r_j, double h) {
    if (!(h > 0)) throw invalid_input("grid requires h > 0");
    if (h > r_j / 4.0) throw resolution_error("grid spacing exceeds r_j / 4");
    if (h > inr.r_omega / 16.0) throw resolution_error("grid spacing exceeds r_omega / 16");

    Grid g;
    g.dim = domain.dim;
    g.h = h;
    g.r_j = r_j;
    g.domain = domain;
    g.inr = inr;

    auto [lo, hi] = bounding_box(domain);
    double pad = r_j + h;
    int i_lo = -static_cast<int>(std::ceil((inr.center.x - (lo.x - pad)) / h));
    int i_hi = static_cast<int>(std::ceil(((hi.x + pad) - inr.center.x) / h));
    g.nx = i_hi - i_lo + 1;
    g.center_i = -i_lo;
    g.origin.x = inr.center.x + i_lo * h;
    if (domain.dim == 2) {
        int j_lo = -static_cast<int>(std::ceil((inr.center.y - (lo.y - pad)) / h));
        int j_hi = static_cast<int>(std::ceil(((hi.y + pad) - inr.center.y) / h));
        g.ny = j_hi - j_lo + 1;
        g.center_j = -j_lo;
        g.origin.y = inr.center.y + j_lo * h;
    }

    g.mask.resize(g.size());
    g.bdist.resize(g.size());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int id = g.index(i, j);
            double d = signed_boundary_distance(domain, g.point(i, j));
            g.bdist[id] = d;
            if (d > 0)
                g.mask[id] = NodeClass::Interior;
            else if (-d <= r_j)
                g.mask[id] = NodeClass::Band;
            else
                g.mask[id] = NodeClass::Exterior;
        }
    }
    for (int id = 0; id < g.size(); ++id) {
        if (g.mask[id] == NodeClass::Interior) g.interior.push_back(id);
        if (g.mask[id] != NodeClass::Exterior) g.active.push_back(id);
    }
    if (g.interior.empty()) throw resolution_error("no interior nodes; domain unresolved");
    return g;
}

inline Grid make_grid(const Domain& domain, double r_j, double h) {
    return make_grid(domain, make_inradius_data(domain, r_j), r_j, h);
}

// Node values on the lattice; zero off the interior by construction.
struct ScalarField {
    std::vector<double> v;
};

inline ScalarField zero_field(const Grid& g) {
    ScalarField f;
    f.v.assign(g.size(), 0.0);
    return f;
}

inline void enforce_zero_exterior(const Grid& g, ScalarField& f) {
    for (int id = 0; id < g.size(); ++id)
        if (!g.is_interior(id)) f.v[id] = 0.0;
}

// Samples fn at interior nodes only; everything else stays zero.
template <class Fn>
ScalarField sample_field(const Grid& g, Fn&& fn) {
    ScalarField f = zero_field(g);
    for (int id : g.interior) f.v[id] = fn(g.point(id));
    return f;
}

inline double sup_norm(const Grid& g, const ScalarField& f) {
    double m = 0;
    for (int id : g.interior) m = std::max(m, std::abs(f.v[id]));
    return m;
}

// ||u||_p over the interior with the cell measure, max-factored so large p
// cannot underflow.
inline double p_norm(const Grid& g, const ScalarField& f, double p) {
    double m = sup_norm(g, f);
    if (m == 0.0) return 0.0;
    double s = 0;
    for (int id : g.interior) {
        double t = std::abs(f.v[id]) / m;
        if (t > 0) s += std::pow(t, p);
    }
    return m * std::exp((std::log(s) + std::log(g.cell_measure())) / p);
}

} // namespace plapmix
