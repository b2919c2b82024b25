#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "plapmix/eigensolver.hpp"
#include "plapmix/energy.hpp"
#include "plapmix/geometry.hpp"
#include "plapmix/grid.hpp"
#include "plapmix/kernel.hpp"

using namespace plapmix;

namespace {

// Dense assembly of the p = 2 energy over interior dofs, independently of
// the gradient code: E(u) = u^T A u with band and exterior values pinned to
// zero, and the mass matrix is h^N I.
Eigen::MatrixXd assemble_dense(const Grid& g, const WeightTable& wt, double alpha, double beta) {
    std::vector<int> dof(g.size(), -1);
    for (std::size_t k = 0; k < g.interior.size(); ++k) dof[g.interior[k]] = static_cast<int>(k);
    int n = static_cast<int>(g.interior.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);

    auto add_pair = [&](int ida, int idb, double c) {
        int da = ida >= 0 ? dof[ida] : -1;
        int db = idb >= 0 ? dof[idb] : -1;
        if (da >= 0) a(da, da) += c;
        if (db >= 0) a(db, db) += c;
        if (da >= 0 && db >= 0) {
            a(da, db) -= c;
            a(db, da) -= c;
        }
    };

    double hn = g.cell_measure();
    if (alpha > 0) {
        double c = alpha * hn / (g.h * g.h);
        if (g.dim == 1) {
            for (int i = 0; i + 1 < g.nx; ++i) add_pair(i, i + 1, c);
        } else {
            for (int j = 0; j + 1 < g.ny; ++j)
                for (int i = 0; i + 1 < g.nx; ++i) {
                    int id = g.index(i, j);
                    add_pair(id, id + 1, c);
                    add_pair(id, id + g.nx, c);
                }
        }
    }
    if (beta > 0) {
        for (int id : g.active) {
            int i = id % g.nx, j = id / g.nx;
            for (const Offset& o : wt.offsets) {
                if (o.di == 0 && o.dj == 0) continue;
                if (o.weight == 0.0) continue;
                int ii = i + o.di, jj = j + o.dj;
                int idb = g.in_lattice(ii, jj) ? g.index(ii, jj) : -1;
                add_pair(id, idb, beta * o.weight * hn);
            }
        }
    }
    return a;
}

double dense_lambda1(const Grid& g, const WeightTable& wt, double alpha, double beta,
                     Eigen::VectorXd* vec = nullptr) {
    Eigen::MatrixXd a = assemble_dense(g, wt, alpha, beta);
    int n = static_cast<int>(g.interior.size());
    Eigen::MatrixXd b = g.cell_measure() * Eigen::MatrixXd::Identity(n, n);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
    if (vec) *vec = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
}

} // namespace

TEST_CASE("p = 2 eigenvalue matches the dense generalized solver, 1D") {
    Grid g = make_grid(Domain::interval(-2.0, 2.0), 1.0, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 1.0, 1);
    WeightTable wt = make_weight_table(k, g.h);

    for (auto [alpha, beta] : {std::pair{1.0, 1.0}, {2.0, 0.5}}) {
        Eigen::VectorXd vec;
        double oracle = dense_lambda1(g, wt, alpha, beta, &vec);
        EigenReport rep = solve_first(g, wt, 2.0, alpha, beta);
        CHECK(rep.converged);
        CHECK_THAT(rep.lambda1, Catch::Matchers::WithinRel(oracle, 1e-8));

        // The eigenfields agree up to normalization and sign.
        double uu = 0, vv = 0, uv = 0;
        for (std::size_t kk = 0; kk < g.interior.size(); ++kk) {
            double a = rep.field.v[g.interior[kk]], b = vec(static_cast<int>(kk));
            uu += a * a;
            vv += b * b;
            uv += a * b;
        }
        CHECK(std::abs(uv) / std::sqrt(uu * vv) > 1.0 - 1e-6);
    }
}

TEST_CASE("p = 2 eigenvalue matches the dense generalized solver, 2D ball") {
    Grid g = make_grid(Domain::ball(Point{0, 0}, 1.0), 0.4, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.4, 2);
    WeightTable wt = make_weight_table(k, g.h);
    double oracle = dense_lambda1(g, wt, 1.0, 1.0);
    EigenReport rep = solve_first(g, wt, 2.0, 1.0, 1.0);
    CHECK(rep.converged);
    CHECK_THAT(rep.lambda1, Catch::Matchers::WithinRel(oracle, 1e-8));
}

TEST_CASE("pure local p = 2 on the unit interval hits the tridiagonal closed form") {
    double h = 1.0 / 128;
    Grid g = make_grid(Domain::interval(0.0, 1.0), 0.25, h);
    Kernel k = Kernel::make(Profile::Tent, 0.25, 1);
    WeightTable wt = make_weight_table(k, g.h);
    EigenReport rep = solve_first(g, wt, 2.0, 1.0, 0.0);
    double s = std::sin(std::numbers::pi * h / 2.0);
    double exact = 4.0 / (h * h) * s * s;
    CHECK(rep.converged);
    CHECK_THAT(rep.lambda1, Catch::Matchers::WithinRel(exact, 1e-8));
    double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(rep.lambda1 - pi2) < 0.005 * pi2);
}

TEST_CASE("reported eigenfield is normalized, nonnegative, and self-consistent") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Bump, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    EigenReport rep = solve_first(g, wt, 3.0, 1.0, 1.0);
    CHECK(rep.converged);
    CHECK(std::abs(p_norm(g, rep.field, 3.0) - 1.0) < 1e-10);
    for (int id = 0; id < g.size(); ++id) {
        if (g.is_interior(id))
            CHECK(rep.field.v[id] >= 0.0);
        else
            CHECK(rep.field.v[id] == 0.0);
    }
    CHECK(sup_norm(g, rep.field) > 0.0);
    CHECK_THAT(rayleigh(g, rep.field, 3.0, 1.0, 1.0, wt),
               Catch::Matchers::WithinRel(rep.lambda1, 1e-12));
    CHECK_THAT(rep.lambda1_root, Catch::Matchers::WithinRel(std::exp(rep.log_lambda1 / 3.0), 1e-13));
}

TEST_CASE("accepted iterates never increase the quotient") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    SolverOptions opts;
    opts.trace_every = 1;
    EigenReport rep = solve_first(g, wt, 4.0, 1.0, 1.0, opts);
    REQUIRE(rep.trace.size() > 3);
    for (std::size_t i = 1; i < rep.trace.size(); ++i)
        CHECK(rep.trace[i].lambda_root <= rep.trace[i - 1].lambda_root * (1.0 + 1e-12));
}

TEST_CASE("independent initializations land on the same eigenvalue") {
    Grid g = make_grid(Domain::interval(-1.5, 1.5), 0.75, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.75, 1);
    WeightTable wt = make_weight_table(k, g.h);
    SolverOptions a, b;
    a.init = InitKind::BoundaryDistance;
    b.init = InitKind::Uniform;
    EigenReport ra = solve_first(g, wt, 4.0, 1.0, 1.0, a);
    EigenReport rb = solve_first(g, wt, 4.0, 1.0, 1.0, b);
    CHECK(ra.converged);
    CHECK(rb.converged);
    CHECK(std::abs(ra.lambda1 - rb.lambda1) <= 10.0 * a.tol_lambda * ra.lambda1);
}

TEST_CASE("continuation ladder agrees with a direct large-p solve") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    SolverOptions with, without;
    without.continuation = false;
    EigenReport ra = solve_first(g, wt, 16.0, 1.0, 1.0, with);
    EigenReport rb = solve_first(g, wt, 16.0, 1.0, 1.0, without);
    CHECK(ra.converged);
    CHECK(rb.converged);
    CHECK(std::abs(ra.lambda1 - rb.lambda1) <= 1e-6 * ra.lambda1);
}

TEST_CASE("warm-started sweep converges at every exponent") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    std::vector<EigenReport> reps = sweep_p(g, wt, {2.0, 4.0, 8.0}, 1.0, 1.0);
    REQUIRE(reps.size() == 3);
    for (const EigenReport& r : reps) {
        CHECK(r.converged);
        CHECK(r.lambda1_root > 0.0);
        CHECK(std::isfinite(r.log_lambda1));
    }
}

TEST_CASE("exhausted budgets throw and carry the best iterate") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    SolverOptions opts;
    opts.max_iters = 3;
    bool threw = false;
    try {
        solve_first(g, wt, 6.0, 1.0, 1.0, opts);
    } catch (const solve_error& e) {
        threw = true;
        CHECK_FALSE(e.best.converged);
        CHECK(e.best.message == "max_iters reached");
        CHECK(sup_norm(g, e.best.field) > 0.0);
    }
    CHECK(threw);

    std::vector<EigenReport> reps = sweep_p(g, wt, {6.0}, 1.0, 1.0, opts);
    REQUIRE(reps.size() == 1);
    CHECK_FALSE(reps[0].converged);
}

TEST_CASE("solver validates its inputs") {
    Grid g = make_grid(Domain::interval(-1.0, 1.0), 0.5, 1.0 / 16);
    Kernel k = Kernel::make(Profile::Tent, 0.5, 1);
    WeightTable wt = make_weight_table(k, g.h);
    CHECK_THROWS_AS(solve_first(g, wt, 1.5, 1.0, 1.0), invalid_input);
    CHECK_THROWS_AS(solve_first(g, wt, 2.0, 0.0, 0.0), invalid_input);
    CHECK_THROWS_AS(solve_first(g, wt, 2.0, -1.0, 1.0), invalid_input);
}
