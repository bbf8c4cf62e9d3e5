#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pldc/lshaped.hpp"
#include "pldc/simplex.hpp"

using namespace pldc;

namespace {

// Random first-stage-feasible point for lower-bound spot checks.
Eigen::VectorXd random_feasible_x(const TwoStageInstance& inst, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.1, 2.0);
    Eigen::VectorXd obj(inst.d_x());
    for (int j = 0; j < inst.d_x(); ++j) obj[j] = w(rng);
    auto sol = solve_lp(LinearProgram(obj, inst.A, inst.b_nominal));
    REQUIRE(sol.status == LpStatus::Optimal);
    return sol.x;
}

}  // namespace

TEST_CASE("aggregate cut is tight at its point and valid elsewhere") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 8, .seed = 21});
    std::mt19937_64 rng(5);
    Eigen::VectorXd x = random_feasible_x(inst, rng);
    Cut cut = aggregate_cut(inst, x);
    double exact = first_stage_objective(inst, x) - inst.c.dot(x);
    CHECK(cut.value_at(x) == doctest::Approx(exact).epsilon(1e-8));
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd xp = random_feasible_x(inst, rng);
        double rec = first_stage_objective(inst, xp) - inst.c.dot(xp);
        CHECK(cut.value_at(xp) <= rec + 1e-8);
    }
}

TEST_CASE("single scenario: cut has no aggregation and Benders is quick") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 1, .seed = 2});
    std::mt19937_64 rng(1);
    Eigen::VectorXd x = random_feasible_x(inst, rng);
    auto res = solve_subproblem(inst, x, 0);
    Cut cut = aggregate_cut(inst, x);
    CHECK(cut.alpha == doctest::Approx(res.duals.dot(inst.scenarios[0].h)).epsilon(1e-12));
    Eigen::VectorXd expect_beta = -inst.scenarios[0].T.transpose() * res.duals;
    CHECK((cut.beta - expect_beta).lpNorm<Eigen::Infinity>() < 1e-12);

    auto ls = solve_lshaped(inst, inst.b_nominal);
    auto ext = solve_lp(build_extensive_form(inst, inst.b_nominal));
    CHECK(ls.v_star == doctest::Approx(ext.objective).epsilon(1e-7));
}

TEST_CASE("lshaped matches the extensive form on synthetic instances") {
    for (std::uint64_t seed : {100, 101, 102, 103, 104}) {
        auto inst = generate_synthetic(
            {.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 16, .seed = seed});
        auto ls = solve_lshaped(inst, inst.b_nominal);
        auto ext = solve_lp(build_extensive_form(inst, inst.b_nominal));
        REQUIRE(ext.status == LpStatus::Optimal);
        CHECK(ls.v_star ==
              doctest::Approx(ext.objective).epsilon(1e-7));
        CHECK(ls.iterations < 500);
        CHECK_FALSE(ls.iter_limit);
        // Result invariants.
        CHECK(ls.v_star == doctest::Approx(inst.c.dot(ls.x_star) + ls.eta_star).epsilon(1e-9));
        double best = -kInf;
        for (const auto& cut : ls.cuts_all) best = std::max(best, cut.value_at(ls.x_star));
        CHECK(ls.eta_star == doctest::Approx(best).epsilon(1e-9));
        REQUIRE(!ls.cuts_active.empty());
        double abest = -kInf;
        for (const auto& cut : ls.cuts_active) abest = std::max(abest, cut.value_at(ls.x_star));
        CHECK(std::abs(abest - ls.eta_star) <= 1e-6);
    }
}

TEST_CASE("infeasible rhs raises MasterInfeasible") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 2, .seed = 8});
    Eigen::VectorXd bad = -inst.b_nominal;  // A is all-positive, so -b is outside pos(A)
    CHECK_THROWS_AS(solve_lshaped(inst, bad), MasterInfeasible);
}

TEST_CASE("exported cuts are valid lower bounds on the recourse") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 8, .seed = 77});
    auto ls = solve_lshaped(inst, inst.b_nominal);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd xp = random_feasible_x(inst, rng);
        double rec = first_stage_objective(inst, xp) - inst.c.dot(xp);
        for (const auto& cut : ls.cuts_all) CHECK(cut.value_at(xp) <= rec + 1e-8);
    }
}

TEST_CASE("cut deduplication") {
    Cut a;
    a.alpha = 1.0;
    a.beta = Eigen::VectorXd::Ones(2);
    Cut b = a;
    Cut c = a;
    c.alpha = 1.0 + 1e-6;
    auto out = dedup_cuts({a, b, c});
    CHECK(out.size() == 2);
}
