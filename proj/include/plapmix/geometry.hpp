#pragma once

// Domain descriptions, the inradius R_Omega and its decomposition
// R_Omega = K * R_J + b with K integer and 0 <= b < R_J, and the dilated
// region reached from the domain within one kernel radius.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "plapmix/errors.hpp"

namespace plapmix {

// Points are stored with two components in every dimension; 1D sets y = 0,
// which keeps distance formulas dimension-agnostic.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double norm2(Point p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point p) { return std::sqrt(norm2(p)); }
inline Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline double dist(Point a, Point b) { return norm(sub(a, b)); }

enum class ShapeKind { Interval, Box, Ball, Polygon };

struct Domain {
    int dim = 1;
    ShapeKind kind = ShapeKind::Interval;
    Point lo{};         // Interval: [lo.x, hi.x]; Box: corners
    Point hi{};
    Point center{};     // Ball
    double radius = 0;  // Ball
    std::vector<Point> vertices;  // Polygon, in order

    static Domain interval(double a, double b) {
        if (!(a < b)) throw invalid_input("interval requires a < b");
        Domain d;
        d.dim = 1;
        d.kind = ShapeKind::Interval;
        d.lo = {a, 0};
        d.hi = {b, 0};
        return d;
    }
    static Domain box(Point lo, Point hi) {
        if (!(lo.x < hi.x && lo.y < hi.y)) throw invalid_input("box requires lo < hi per axis");
        Domain d;
        d.dim = 2;
        d.kind = ShapeKind::Box;
        d.lo = lo;
        d.hi = hi;
        return d;
    }
    static Domain ball(Point c, double r) {
        if (!(r > 0)) throw invalid_input("ball requires radius > 0");
        Domain d;
        d.dim = 2;
        d.kind = ShapeKind::Ball;
        d.center = c;
        d.radius = r;
        return d;
    }
    static Domain polygon(std::vector<Point> verts) {
        if (verts.size() < 3) throw invalid_input("polygon requires at least 3 vertices");
        double area2 = 0;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            const Point& a = verts[i];
            const Point& b = verts[(i + 1) % verts.size()];
            area2 += a.x * b.y - b.x * a.y;
        }
        if (std::abs(area2) <= 0) throw invalid_input("polygon has zero area");
        Domain d;
        d.dim = 2;
        d.kind = ShapeKind::Polygon;
        d.vertices = std::move(verts);
        return d;
    }
};

inline std::pair<Point, Point> bounding_box(const Domain& d) {
    switch (d.kind) {
        case ShapeKind::Interval:
        case ShapeKind::Box: return {d.lo, d.hi};
        case ShapeKind::Ball:
            return {{d.center.x - d.radius, d.center.y - d.radius},
                    {d.center.x + d.radius, d.center.y + d.radius}};
        case ShapeKind::Polygon: {
            Point lo = d.vertices.front(), hi = d.vertices.front();
            for (const Point& v : d.vertices) {
                lo.x = std::min(lo.x, v.x);
                lo.y = std::min(lo.y, v.y);
                hi.x = std::max(hi.x, v.x);
                hi.y = std::max(hi.y, v.y);
            }
            return {lo, hi};
        }
    }
    throw invalid_input("unknown domain kind");
}

inline double diameter_bound(const Domain& d) {
    auto [lo, hi] = bounding_box(d);
    return dist(lo, hi);
}

namespace detail {

inline double point_segment_distance(Point p, Point a, Point b) {
    Point ab = sub(b, a);
    double len2 = norm2(ab);
    if (len2 == 0.0) return dist(p, a);
    double t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, {a.x + t * ab.x, a.y + t * ab.y});
}

inline bool polygon_contains(const std::vector<Point>& vs, Point p) {
    // Crossing-number test; points on an edge are resolved by the distance
    // check in signed_boundary_distance before this is consulted.
    bool inside = false;
    std::size_t n = vs.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        bool straddles = (vs[i].y > p.y) != (vs[j].y > p.y);
        if (straddles) {
            double xi = vs[j].x + (p.y - vs[j].y) / (vs[i].y - vs[j].y) * (vs[i].x - vs[j].x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

} // namespace detail

// Positive inside the domain (distance to the boundary), negative outside
// (minus the distance to the closed domain), zero on the boundary.
inline double signed_boundary_distance(const Domain& d, Point p) {
    switch (d.kind) {
        case ShapeKind::Interval: {
            return std::min(p.x - d.lo.x, d.hi.x - p.x);
        }
        case ShapeKind::Box: {
            double ix = std::min(p.x - d.lo.x, d.hi.x - p.x);
            double iy = std::min(p.y - d.lo.y, d.hi.y - p.y);
            if (ix >= 0 && iy >= 0) return std::min(ix, iy);
            double ox = std::max(0.0, -ix);
            double oy = std::max(0.0, -iy);
            return -std::sqrt(ox * ox + oy * oy);
        }
        case ShapeKind::Ball: {
            return d.radius - dist(p, d.center);
        }
        case ShapeKind::Polygon: {
            double best = std::numeric_limits<double>::infinity();
            std::size_t n = d.vertices.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++)
                best = std::min(best, detail::point_segment_distance(p, d.vertices[j], d.vertices[i]));
            return detail::polygon_contains(d.vertices, p) ? best : -best;
        }
    }
    throw invalid_input("unknown domain kind");
}

inline bool contains(const Domain& d, Point p) { return signed_boundary_distance(d, p) > 0.0; }

// Distance from p to the closed domain: 0 inside, Euclidean gap outside.
inline double distance_to_domain(const Domain& d, Point p) {
    return std::max(0.0, -signed_boundary_distance(d, p));
}

namespace detail {

// Maximizes the boundary distance over a polygon: coarse grid scan for a
// seed, then a Nelder-Mead simplex shrunk to tol.
inline std::pair<double, Point> polygon_inradius(const Domain& d, double tol) {
    auto [lo, hi] = bounding_box(d);
    auto f = [&](Point p) { return signed_boundary_distance(d, p); };

    Point seed{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    double best = f(seed);
    const int m = 96;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            Point p{lo.x + (hi.x - lo.x) * i / m, lo.y + (hi.y - lo.y) * j / m};
            double v = f(p);
            if (v > best) {
                best = v;
                seed = p;
            }
        }
    }

    double step = std::max(hi.x - lo.x, hi.y - lo.y) / m;
    std::array<Point, 3> s{seed, {seed.x + step, seed.y}, {seed.x, seed.y + step}};
    std::array<double, 3> fv{f(s[0]), f(s[1]), f(s[2])};
    for (int it = 0; it < 500; ++it) {
        std::array<int, 3> ord{0, 1, 2};
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] > fv[b]; });
        std::array<Point, 3> ss{s[ord[0]], s[ord[1]], s[ord[2]]};
        std::array<double, 3> ff{fv[ord[0]], fv[ord[1]], fv[ord[2]]};
        s = ss;
        fv = ff;
        double size = std::max(dist(s[0], s[1]), std::max(dist(s[0], s[2]), dist(s[1], s[2])));
        if (size < tol) break;

        Point c{0.5 * (s[0].x + s[1].x), 0.5 * (s[0].y + s[1].y)};
        Point refl{c.x + (c.x - s[2].x), c.y + (c.y - s[2].y)};
        double fr = f(refl);
        if (fr > fv[0]) {
            Point exp_{c.x + 2 * (c.x - s[2].x), c.y + 2 * (c.y - s[2].y)};
            double fe = f(exp_);
            if (fe > fr) { s[2] = exp_; fv[2] = fe; }
            else { s[2] = refl; fv[2] = fr; }
        } else if (fr > fv[1]) {
            s[2] = refl;
            fv[2] = fr;
        } else {
            Point con{c.x + 0.5 * (s[2].x - c.x), c.y + 0.5 * (s[2].y - c.y)};
            double fc = f(con);
            if (fc > fv[2]) { s[2] = con; fv[2] = fc; }
            else {
                for (int k = 1; k < 3; ++k) {
                    s[k] = {0.5 * (s[0].x + s[k].x), 0.5 * (s[0].y + s[k].y)};
                    fv[k] = f(s[k]);
                }
            }
        }
    }
    int ibest = fv[0] >= fv[1] && fv[0] >= fv[2] ? 0 : (fv[1] >= fv[2] ? 1 : 2);
    return {fv[ibest], s[ibest]};
}

} // namespace detail

// Largest inscribed ball: radius and a center attaining it.
inline std::pair<double, Point> inradius(const Domain& d) {
    switch (d.kind) {
        case ShapeKind::Interval:
            return {0.5 * (d.hi.x - d.lo.x), {0.5 * (d.lo.x + d.hi.x), 0}};
        case ShapeKind::Box:
            return {0.5 * std::min(d.hi.x - d.lo.x, d.hi.y - d.lo.y),
                    {0.5 * (d.lo.x + d.hi.x), 0.5 * (d.lo.y + d.hi.y)}};
        case ShapeKind::Ball:
            return {d.radius, d.center};
        case ShapeKind::Polygon:
            return detail::polygon_inradius(d, 1e-6 * diameter_bound(d));
    }
    throw invalid_input("unknown domain kind");
}

// R_Omega = k * r_j + b with k a nonnegative integer and b in [0, r_j).
// A remainder within 1e-9 * r_j of r_j rolls over to (k + 1, 0).
inline std::pair<int, double> decompose(double r_omega, double r_j) {
    if (!(r_omega > 0)) throw invalid_input("decompose requires r_omega > 0");
    if (!(r_j > 0)) throw invalid_input("decompose requires r_j > 0");
    int k = static_cast<int>(std::floor(r_omega / r_j));
    double b = r_omega - k * r_j;
    const double tol_b = 1e-9 * r_j;
    if (b >= r_j - tol_b) {
        ++k;
        b = 0.0;
    }
    if (b < 0.0) b = 0.0;
    return {k, b};
}

struct InradiusData {
    double r_omega = 0;
    Point center{};
    int k_omega = 0;
    double b = 0;
};

inline InradiusData make_inradius_data(const Domain& d, double r_j) {
    auto [r, c] = inradius(d);
    auto [k, b] = decompose(r, r_j);
    return {r, c, k, b};
}

// Region reachable from the domain within distance r_j (closed kernel
// support), i.e. { y : dist(y, Omega) <= r_j }.
struct DilatedRegion {
    Domain domain;
    double r_j = 0;
    bool contains(Point p) const { return distance_to_domain(domain, p) <= r_j; }
};

inline DilatedRegion dilate(const Domain& d, double r_j) {
    if (!(r_j > 0)) throw invalid_input("dilate requires r_j > 0");
    return {d, r_j};
}

} // namespace plapmix
