#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pldc/lshaped.hpp"
#include "pldc/sequential.hpp"
#include "pldc/simplex.hpp"
#include "pldc/stats.hpp"

using namespace pldc;

namespace {

TrainingDataset lshaped_dataset(const TwoStageInstance& inst, int n, std::uint64_t seed) {
    std::vector<int> rows(inst.m1());
    for (int k = 0; k < inst.m1(); ++k) rows[k] = k;
    auto cfg = default_rhs_config(inst.b_nominal, rows, n, seed);
    TrainingDataset ds;
    for (const auto& b : sample_rhs(cfg, inst.b_nominal)) {
        auto ls = solve_lshaped(inst, b);
        TrainingPoint pt;
        pt.b = b;
        pt.x_star = ls.x_star;
        pt.eta_star = ls.eta_star;
        pt.v_star = ls.v_star;
        ds.points.push_back(std::move(pt));
        for (const auto& cut : ls.cuts_active) ds.bundle.push_back(cut);
    }
    ds.bundle = dedup_cuts(ds.bundle, 1e-12);
    return ds;
}

std::vector<int> all_rows(const TwoStageInstance& inst) {
    std::vector<int> rows(inst.m1());
    for (int k = 0; k < inst.m1(); ++k) rows[k] = k;
    return rows;
}

}  // namespace

TEST_CASE("feasibility CI upper bound is the rate plus z/(2 sqrt n) exactly") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 11});
    auto ds = lshaped_dataset(inst, 5, 3);
    auto policy = fit_policy(inst.c, inst.A, ds);
    // Evaluate at the training points themselves: all feasible.
    std::vector<Eigen::VectorXd> batch;
    for (const auto& pt : ds.points) batch.push_back(pt.b);
    auto fs = feasibility_stats(policy, inst.A, batch, kPolicyFeasTol, 1.96);
    CHECK(fs.R == 0.0);
    CHECK(fs.ci_upper == 1.96 / (2.0 * std::sqrt(5.0)));
    CHECK(fs.feasible_indices.size() == 5);

    // Corrupt one rhs far outside the trained range: that point turns infeasible.
    batch[2] = 50.0 * inst.b_nominal;
    auto fs2 = feasibility_stats(policy, inst.A, batch, kPolicyFeasTol, 1.96);
    CHECK(fs2.R == doctest::Approx(0.2));
    CHECK(fs2.ci_upper == doctest::Approx(0.2 + ci_half_width(1.96, 5)));
}

TEST_CASE("suboptimality at training points is zero with an exact CI width") {
    auto inst = generate_synthetic({.d_x = 4, .m1 = 2, .m2 = 3, .num_scenarios = 8, .seed = 23});
    auto ds = lshaped_dataset(inst, 6, 4);
    auto policy = fit_policy(inst.c, inst.A, ds);
    std::vector<Eigen::VectorXd> batch;
    for (const auto& pt : ds.points) batch.push_back(pt.b);
    auto st = suboptimality_stats_lshaped(policy, inst, batch, kOptGapSmall, 1.96);
    CHECK(st.p == 0.0);
    CHECK(st.ci_upper == ci_half_width(1.96, 6));

    // An empty feasible batch certifies nothing.
    auto none = suboptimality_stats_lshaped(policy, inst, {}, kOptGapSmall, 1.96);
    CHECK(std::isinf(none.ci_upper));
}

TEST_CASE("paired hypothesis test: trivial accept, rejection, determinism") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 8, .seed = 31});
    auto ls = solve_lshaped(inst, inst.b_nominal);

    // Identical candidates: every common-random-number gap is exactly zero.
    auto same = hypothesis_test_sd(inst, inst.b_nominal, ls.x_star, ls.x_star, 30, 0.05, 7);
    CHECK(same.accept);
    CHECK(std::abs(same.mean_gap) <= 1e-15);
    CHECK(same.std_gap == 0.0);

    // A clearly worse feasible point is rejected.
    Eigen::VectorXd bad_obj = Eigen::VectorXd::Zero(inst.d_x());
    for (int j = 0; j < inst.d_x(); ++j) bad_obj[j] = -inst.c[j];  // maximize the cost
    auto worst = solve_lp(LinearProgram(bad_obj, inst.A, inst.b_nominal));
    REQUIRE(worst.status == LpStatus::Optimal);
    double exact_gap = first_stage_objective(inst, worst.x) - ls.v_star;
    REQUIRE(exact_gap > 1e-3);
    auto rej = hypothesis_test_sd(inst, inst.b_nominal, ls.x_star, worst.x, 30, 0.05, 7);
    CHECK(!rej.accept);
    CHECK(rej.mean_gap == doctest::Approx(exact_gap).epsilon(0.5));

    auto rej2 = hypothesis_test_sd(inst, inst.b_nominal, ls.x_star, worst.x, 30, 0.05, 7);
    CHECK(rej2.mean_gap == rej.mean_gap);
    CHECK(rej2.std_gap == rej.std_gap);
}

TEST_CASE("sequential run converges to a zero-append steady state") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 11});
    SequentialConfig cfg;
    cfg.seed = 5;
    cfg.ci_tol = 0.5;  // reachable threshold so the run stops on the CI test
    cfg.min_rounds = 3;
    cfg.max_rounds = 30;
    cfg.pool_size = 200;
    cfg.rhs = default_rhs_config(inst.b_nominal, all_rows(inst), 1, 5, RhsMode::LatinHypercube);
    auto res = run_sequential(inst, cfg, lshaped_dataset(inst, 4, 9));

    CHECK(res.stopped == StopReason::Converged);
    CHECK(static_cast<int>(res.history.size()) < cfg.max_rounds);
    REQUIRE(!res.history.empty());
    const auto& last = res.history.back();
    CHECK(last.feas_ci_upper <= cfg.ci_tol);
    CHECK(last.opt_ci_upper <= cfg.ci_tol);
    CHECK(last.infeasible_fraction == 0.0);
    CHECK(last.subopt_fraction == 0.0);
    CHECK(last.appended == 0);
    CHECK(res.t_feas >= 1);
    CHECK(res.t_opt >= res.t_feas);

    // Batch sizes grow by the configured factor; training set growth is bounded
    // by the appended counts and the dataset never shrinks.
    int n_expected = cfg.n0;
    int prev_size = 4;
    long observations = 0;
    for (const auto& rec : res.history) {
        CHECK(rec.batch_size == n_expected);
        n_expected = static_cast<int>(std::ceil(cfg.growth * n_expected));
        CHECK(rec.training_size == prev_size + rec.appended);
        prev_size = rec.training_size;
        observations += rec.batch_size;
    }
    CHECK(res.history.back().training_size <= 4 + observations);

    // Determinism: the same configuration replays the identical history.
    auto res2 = run_sequential(inst, cfg, lshaped_dataset(inst, 4, 9));
    REQUIRE(res2.history.size() == res.history.size());
    for (std::size_t i = 0; i < res.history.size(); ++i) {
        CHECK(res2.history[i].infeasible_fraction == res.history[i].infeasible_fraction);
        CHECK(res2.history[i].subopt_fraction == res.history[i].subopt_fraction);
        CHECK(res2.history[i].appended == res.history[i].appended);
    }
}

TEST_CASE("appended points are unique and only failures are appended") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 17});
    SequentialConfig cfg;
    cfg.seed = 12;
    cfg.ci_tol = 0.5;
    cfg.min_rounds = 2;
    cfg.max_rounds = 25;
    cfg.pool_size = 100;
    cfg.rhs = default_rhs_config(inst.b_nominal, all_rows(inst), 1, 12, RhsMode::LatinHypercube);
    // Start from a single training point so early rounds must append.
    auto res = run_sequential(inst, cfg, lshaped_dataset(inst, 1, 2));
    CHECK(res.stopped == StopReason::Converged);

    // Rounds that measured everything feasible and optimal appended nothing.
    for (const auto& rec : res.history)
        if (rec.infeasible_fraction == 0.0 && rec.subopt_fraction == 0.0)
            CHECK(rec.appended == 0);

    // Replays of overlapping pool draws never duplicate a training point: the
    // training size is bounded by 1 + number of distinct pool entries.
    CHECK(res.history.back().training_size <= 1 + cfg.pool_size);
}

TEST_CASE("generator mode draws fresh batches and still terminates") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 11});
    SequentialConfig cfg;
    cfg.seed = 3;
    cfg.ci_tol = 0.5;
    cfg.min_rounds = 3;
    cfg.max_rounds = 30;
    cfg.pool_size = 0;  // direct generator mode
    cfg.rhs = default_rhs_config(inst.b_nominal, all_rows(inst), 1, 3, RhsMode::LatinHypercube);
    auto res = run_sequential(inst, cfg, lshaped_dataset(inst, 4, 9));
    CHECK(res.stopped == StopReason::Converged);
    CHECK(res.history.back().appended == 0);
}

TEST_CASE("invalid configurations are rejected") {
    auto inst = generate_synthetic({.d_x = 3, .m1 = 2, .m2 = 2, .num_scenarios = 4, .seed = 11});
    SequentialConfig cfg;
    CHECK_THROWS_AS(run_sequential(inst, cfg, TrainingDataset{}), ValidationError);
    cfg.n0 = 0;
    CHECK_THROWS_AS(run_sequential(inst, cfg, lshaped_dataset(inst, 2, 1)), ValidationError);
    CHECK_THROWS_AS(hypothesis_test_sd(inst, inst.b_nominal, inst.c, inst.c, 1, 0.05, 0),
                    ValidationError);
}
