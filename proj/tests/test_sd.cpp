#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pldc/lshaped.hpp"
#include "pldc/qp.hpp"
#include "pldc/sd.hpp"
#include "pldc/simplex.hpp"

using namespace pldc;

namespace {
Eigen::VectorXd random_feasible_x(const TwoStageInstance& inst, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.1, 2.0);
    Eigen::VectorXd obj(inst.d_x());
    for (int j = 0; j < inst.d_x(); ++j) obj[j] = w(rng);
    auto sol = solve_lp(LinearProgram(obj, inst.A, inst.b_nominal));
    REQUIRE(sol.status == LpStatus::Optimal);
    return sol.x;
}
}  // namespace

TEST_CASE("regularized master matches an exact reformulation") {
    // One-dimensional check: min x + eta + 0.5(x-2)^2, x = b via A, cuts on eta.
    Eigen::VectorXd c(2), b(1), x_hat(2);
    c << 1.0, 0.5;
    Eigen::MatrixXd A(1, 2);
    A << 1.0, 1.0;
    b << 3.0;
    x_hat << 2.0, 1.0;
    std::vector<Cut> cuts(2);
    cuts[0].alpha = 1.0;
    cuts[0].beta = Eigen::VectorXd::Zero(2);
    cuts[0].beta << -0.5, 0.0;
    cuts[1].alpha = 0.0;
    cuts[1].beta = Eigen::VectorXd::Zero(2);
    cuts[1].beta << 0.25, 0.1;
    auto res = solve_regularized_master(c, A, b, cuts, x_hat, 1.0);
    // Oracle: dense scan over the segment x0 in [0,3], x1 = 3 - x0.
    double best = kInf;
    for (int i = 0; i <= 300000; ++i) {
        double x0 = 3.0 * i / 300000.0;
        double x1 = 3.0 - x0;
        double eta = std::max(cuts[0].alpha - 0.5 * x0, cuts[1].alpha + 0.25 * x0 + 0.1 * x1);
        double val = x0 + 0.5 * x1 + eta +
                     0.5 * ((x0 - 2.0) * (x0 - 2.0) + (x1 - 1.0) * (x1 - 1.0));
        best = std::min(best, val);
    }
    CHECK(res.objective == doctest::Approx(best).epsilon(1e-6));
    CHECK((A * res.x - b).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(res.x.minCoeff() > -1e-9);
    double envelope = std::max(cuts[0].value_at(res.x), cuts[1].value_at(res.x));
    CHECK(res.eta >= envelope - 1e-9);
}

TEST_CASE("proximal descent: master objective at solution <= at incumbent") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 8, .seed = 19});
    std::mt19937_64 rng(3);
    Eigen::VectorXd x_hat = random_feasible_x(inst, rng);
    std::vector<Cut> cuts;
    for (int t = 0; t < 4; ++t) cuts.push_back(aggregate_cut(inst, random_feasible_x(inst, rng)));
    auto res = solve_regularized_master(inst.c, inst.A, inst.b_nominal, cuts, x_hat, 1.0);
    double env_inc = -kInf;
    for (const auto& cut : cuts) env_inc = std::max(env_inc, cut.value_at(x_hat));
    double at_incumbent = inst.c.dot(x_hat) + env_inc;  // proximal term vanishes
    CHECK(res.objective <= at_incumbent + 1e-9);
}

TEST_CASE("single-scenario SD degenerates to the deterministic optimum") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 1, .seed = 7});
    SdOptions opts;
    opts.seed = 1;
    auto sd = solve_sd(inst, inst.b_nominal, opts);
    auto ext = solve_lp(build_extensive_form(inst, inst.b_nominal));
    REQUIRE(ext.status == LpStatus::Optimal);
    double exact_at_incumbent = first_stage_objective(inst, sd.incumbent);
    CHECK(exact_at_incumbent == doctest::Approx(ext.objective).epsilon(1e-4));
    CHECK((inst.A * sd.incumbent - inst.b_nominal).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("SD incumbent is near the L-Shaped optimum and runs are deterministic") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 16, .seed = 42});
    auto ls = solve_lshaped(inst, inst.b_nominal);
    SdOptions opts;
    opts.seed = 42;
    auto sd = solve_sd(inst, inst.b_nominal, opts);
    double exact = first_stage_objective(inst, sd.incumbent);
    CHECK(std::abs(exact - ls.v_star) <= 0.01 * (1.0 + std::abs(ls.v_star)));
    CHECK(!sd.cuts_active.empty());
    CHECK(!sd.dual_vertices.empty());
    CHECK(static_cast<int>(sd.observations.size()) == sd.iterations);

    auto sd2 = solve_sd(inst, inst.b_nominal, opts);
    CHECK((sd.incumbent.array() == sd2.incumbent.array()).all());
    CHECK(sd.value_estimate == sd2.value_estimate);
    CHECK(sd.observations == sd2.observations);
}

TEST_CASE("out-of-sample cut: trivial, tight, and valid") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 8, .seed = 29});
    std::mt19937_64 rng(5);
    Eigen::VectorXd x_hat = random_feasible_x(inst, rng);

    // N = 1: equals the exact single-scenario cut.
    auto c1 = out_of_sample_cut(inst, x_hat, {3});
    auto sub = solve_subproblem(inst, x_hat, 3);
    CHECK(c1.alpha == doctest::Approx(sub.duals.dot(inst.scenarios[3].h)).epsilon(1e-12));
    CHECK(c1.kind == CutKind::OutOfSample);

    auto sample = draw_scenario_sample(inst, 500, 11);
    auto cut = out_of_sample_cut(inst, x_hat, sample);
    // Tight at x_hat.
    auto sa = sample_average_objective(inst, x_hat, sample);
    CHECK(cut.value_at(x_hat) ==
          doctest::Approx(sa.value - inst.c.dot(x_hat)).epsilon(1e-8));
    // Pointwise lower bound on the sample-average recourse.
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd xp = random_feasible_x(inst, rng);
        auto sap = sample_average_objective(inst, xp, sample);
        CHECK(cut.value_at(xp) <= sap.value - inst.c.dot(xp) + 1e-8);
    }
}

TEST_CASE("oos bundle dedupes identical incumbents") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 3});
    std::mt19937_64 rng(9);
    Eigen::VectorXd x1 = random_feasible_x(inst, rng);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> incs{{inst.b_nominal, x1}};
    auto b1 = build_oos_bundle(inst, incs, 200, 5);
    CHECK(b1.size() == 1);
    incs.push_back({inst.b_nominal, x1});  // identical incumbent
    auto b2 = build_oos_bundle(inst, incs, 200, 5);
    CHECK(b2.size() == 1);
}
