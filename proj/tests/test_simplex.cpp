#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pldc/simplex.hpp"

using namespace pldc;

namespace {

// Feasible-by-construction random LP: b = A*x0 with x0 >= 0, c >= 0 so the
// problem is bounded below and the brute-force basis minimum is the optimum.
LinearProgram random_lp(std::mt19937_64& rng, int max_vars = 10, int max_cons = 4) {
    std::uniform_int_distribution<int> mdist(1, max_cons);
    int m = mdist(rng);
    std::uniform_int_distribution<int> ndist(m + 1, max_vars);
    int n = ndist(rng);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> cost(0.0, 2.0);
    std::uniform_real_distribution<double> point(0.0, 2.0);
    while (true) {
        Eigen::MatrixXd A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = entry(rng);
        Eigen::VectorXd c(n), x0(n);
        for (int j = 0; j < n; ++j) {
            c[j] = cost(rng);
            x0[j] = point(rng);
        }
        Eigen::VectorXd b = A * x0;
        try {
            return LinearProgram(c, A, b);
        } catch (const ConstructionError&) {
            continue;  // rank-deficient draw, redo
        }
    }
}

}  // namespace

TEST_CASE("hand-sized LP with known optimum") {
    // min -x - 2y  s.t.  x + y + s = 4, x,y,s >= 0  -> y = 4, obj -8.
    Eigen::VectorXd c(3);
    c << -1.0, -2.0, 0.0;
    Eigen::MatrixXd A(1, 3);
    A << 1.0, 1.0, 1.0;
    Eigen::VectorXd b(1);
    b << 4.0;
    auto sol = solve_lp(LinearProgram(c, A, b));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-8.0).epsilon(1e-12));
    CHECK(sol.x[1] == doctest::Approx(4.0));
    CHECK(sol.basis == std::vector<int>{1});
    // Duality: b'y = c'x at optimum.
    CHECK(sol.duals.dot(b) == doctest::Approx(sol.objective).epsilon(1e-12));
}

TEST_CASE("infeasible and unbounded detection") {
    Eigen::MatrixXd A(1, 2);
    A << 1.0, 1.0;
    Eigen::VectorXd bneg(1);
    bneg << -1.0;  // x + y = -1 with x,y >= 0
    Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
    CHECK(solve_lp(LinearProgram(c, A, bneg)).status == LpStatus::Infeasible);

    // min -x s.t. x - y = 1: increase x and y together forever.
    Eigen::MatrixXd A2(1, 2);
    A2 << 1.0, -1.0;
    Eigen::VectorXd b2(1);
    b2 << 1.0;
    Eigen::VectorXd c2(2);
    c2 << -1.0, 0.0;
    CHECK(solve_lp(LinearProgram(c2, A2, b2)).status == LpStatus::Unbounded);
}

TEST_CASE("upper bounds are honored") {
    // min -x - y s.t. x + y + s = 10, x <= 2, y <= 3, s >= 0.
    Eigen::VectorXd c(3);
    c << -1.0, -1.0, 0.0;
    Eigen::MatrixXd A(1, 3);
    A << 1.0, 1.0, 1.0;
    Eigen::VectorXd b(1);
    b << 10.0;
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd hi(3);
    hi << 2.0, 3.0, kInf;
    auto sol = solve_lp(LinearProgram(c, A, b, lo, hi));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-5.0));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(3.0));
}

TEST_CASE("200 random LPs match the brute-force basis oracle") {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        LinearProgram lp = random_lp(rng);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        auto oracle = brute_force_optimum(lp, lp.rhs());
        REQUIRE(oracle.has_value());
        CHECK(sol.objective == doctest::Approx(*oracle).epsilon(1e-9));
        // Primal feasibility and duality at the reported solution.
        CHECK((lp.constraint_matrix() * sol.x - lp.rhs()).lpNorm<Eigen::Infinity>() < 1e-8);
        CHECK(sol.x.minCoeff() > -1e-9);
        Eigen::VectorXd reduced =
            lp.objective() - lp.constraint_matrix().transpose() * sol.duals;
        CHECK(reduced.minCoeff() > -1e-7);
        CHECK(sol.duals.dot(lp.rhs()) == doctest::Approx(sol.objective).epsilon(1e-7));
    }
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
    std::mt19937_64 rng(7);
    LinearProgram lp = random_lp(rng);
    auto a = solve_lp(lp);
    auto b = solve_lp(lp);
    CHECK(a.basis == b.basis);
    CHECK(a.objective == b.objective);
    CHECK((a.x.array() == b.x.array()).all());
}

TEST_CASE("warm-started rhs resolve agrees with cold solves") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> bump(-0.2, 0.2);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        LinearProgram lp = random_lp(rng);
        auto base = solve_lp(lp);
        REQUIRE(base.status == LpStatus::Optimal);
        std::vector<int> hint = base.basis;
        for (int step = 0; step < 5; ++step) {
            Eigen::VectorXd nb = lp.rhs();
            for (int i = 0; i < nb.size(); ++i) nb[i] += bump(rng);
            auto warm = resolve_with_rhs(lp, nb, hint);
            LinearProgram shifted(lp.objective(), lp.constraint_matrix(), nb);
            auto cold = solve_lp(shifted);
            REQUIRE(warm.status == cold.status);
            if (warm.status == LpStatus::Optimal) {
                CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-8));
                hint = warm.basis;
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("rhs stay inside one cone -> identical warm-start basis") {
    // min x + y s.t. x - y = b: optimum basis flips at b = 0.
    Eigen::VectorXd c(2);
    c << 1.0, 1.0;
    Eigen::MatrixXd A(1, 2);
    A << 1.0, -1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    LinearProgram lp(c, A, b);
    auto s1 = solve_lp(lp);
    Eigen::VectorXd b2(1);
    b2 << 3.0;
    auto s2 = resolve_with_rhs(lp, b2, s1.basis);
    CHECK(s2.basis == s1.basis);
    CHECK(s2.objective == doctest::Approx(3.0));
    Eigen::VectorXd b3(1);
    b3 << -2.0;
    auto s3 = resolve_with_rhs(lp, b3, s1.basis);
    REQUIRE(s3.status == LpStatus::Optimal);
    CHECK(s3.basis != s1.basis);
    CHECK(s3.objective == doctest::Approx(2.0));
}

TEST_CASE("basis enumeration groups rhs by optimal cone") {
    Eigen::VectorXd c(2);
    c << 1.0, 1.0;
    Eigen::MatrixXd A(1, 2);
    A << 1.0, -1.0;
    Eigen::VectorXd b(1);
    b << 1.0;
    LinearProgram lp(c, A, b);
    std::vector<Eigen::VectorXd> rhss;
    for (double v : {1.0, 2.0, -1.0, -5.0, 0.5}) {
        Eigen::VectorXd r(1);
        r << v;
        rhss.push_back(r);
    }
    auto groups = enumerate_optimal_bases(lp, rhss);
    std::vector<double> k1{1.0}, k2{2.0}, k3{-1.0}, k4{-5.0}, k5{0.5};
    CHECK(groups.at(k1) == groups.at(k2));
    CHECK(groups.at(k1) == groups.at(k5));
    CHECK(groups.at(k3) == groups.at(k4));
    CHECK(groups.at(k1) != groups.at(k3));
}

TEST_CASE("degenerate LP terminates (anti-cycling guard)") {
    // Classic degenerate vertex: several bases describe the same point.
    Eigen::VectorXd c(4);
    c << -0.75, 150.0, -0.02, 6.0;
    Eigen::MatrixXd A(3, 7);
    A << 0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0,
         0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0;
    Eigen::VectorXd cc = Eigen::VectorXd::Zero(7);
    cc.head(4) = c;
    Eigen::VectorXd b(3);
    b << 0.0, 0.0, 1.0;
    auto sol = solve_lp(LinearProgram(cc, A, b));
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}
