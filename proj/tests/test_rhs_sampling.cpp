#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pldc/rhs_sampling.hpp"

using namespace pldc;

namespace {
Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("noiseless time series is the exact line") {
    Eigen::VectorXd b = vec2(10.0, 20.0);
    RhsGeneratorConfig cfg;
    cfg.mode = RhsMode::TimeSeries;
    cfg.horizon = 5;
    cfg.perturbed_rows = {0};
    cfg.a0 = {1.0, 0.0};
    cfg.a1 = {0.0, 0.0};
    cfg.sigma = {0.0, 0.0};
    auto seq = sample_time_series(cfg, b);
    REQUIRE(seq.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(seq[i][0] == static_cast<double>(i + 1));  // b_k(i) = i
        CHECK(seq[i][1] == 20.0);                        // unperturbed row untouched
    }

    cfg.a0 = {0.0, 0.0};
    cfg.a1 = {7.5, 0.0};
    auto flat = sample_time_series(cfg, b);
    for (const auto& v : flat) CHECK(v[0] == 7.5);
}

TEST_CASE("time-series noise stream passes a CLT check") {
    const int T = 10000;
    Eigen::VectorXd b = vec2(0.0, 0.0);
    RhsGeneratorConfig cfg;
    cfg.mode = RhsMode::TimeSeries;
    cfg.horizon = T;
    cfg.perturbed_rows = {0, 1};
    cfg.a0 = {0.0, 0.0};
    cfg.a1 = {0.0, 0.0};
    cfg.sigma = {1.0, 2.0};
    cfg.seed = 99;
    auto seq = sample_time_series(cfg, b);
    double mean0 = 0.0, mean1 = 0.0, var0 = 0.0;
    for (const auto& v : seq) {
        mean0 += v[0];
        mean1 += v[1];
        var0 += v[0] * v[0];
    }
    mean0 /= T;
    mean1 /= T;
    var0 /= T;
    CHECK(std::abs(mean0) < 4.0 / std::sqrt(static_cast<double>(T)));
    CHECK(std::abs(mean1) < 8.0 / std::sqrt(static_cast<double>(T)));
    CHECK(var0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("latin hypercube stratification is exact") {
    Eigen::VectorXd b = vec2(0.0, 0.0);
    RhsGeneratorConfig cfg;
    cfg.mode = RhsMode::LatinHypercube;
    cfg.horizon = 4;
    cfg.perturbed_rows = {0, 1};
    cfg.lo = {0.0, -1.0};
    cfg.hi = {4.0, 1.0};
    cfg.seed = 3;
    auto seq = sample_lhs(cfg, b);
    REQUIRE(seq.size() == 4);
    for (int k = 0; k < 2; ++k) {
        std::vector<double> vals;
        for (const auto& v : seq) vals.push_back(v[k]);
        std::sort(vals.begin(), vals.end());
        double width = (cfg.hi[k] - cfg.lo[k]) / 4.0;
        for (int i = 0; i < 4; ++i) {
            CHECK(vals[i] >= cfg.lo[k] + i * width);
            CHECK(vals[i] < cfg.lo[k] + (i + 1) * width);
        }
    }
}

TEST_CASE("lhs single sample covers full range; midpoint flag hits centers") {
    Eigen::VectorXd b = vec2(0.0, 0.0);
    RhsGeneratorConfig cfg;
    cfg.mode = RhsMode::LatinHypercube;
    cfg.horizon = 1;
    cfg.perturbed_rows = {0};
    cfg.lo = {2.0, 0.0};
    cfg.hi = {6.0, 0.0};
    auto one = sample_lhs(cfg, b);
    REQUIRE(one.size() == 1);
    CHECK(one[0][0] >= 2.0);
    CHECK(one[0][0] < 6.0);

    cfg.lhs_midpoint = true;
    cfg.horizon = 2;
    auto mid = sample_lhs(cfg, b);
    std::vector<double> vals{mid[0][0], mid[1][0]};
    std::sort(vals.begin(), vals.end());
    CHECK(vals[0] == doctest::Approx(3.0));
    CHECK(vals[1] == doctest::Approx(5.0));
}

TEST_CASE("lhs rows are paired by near-independent permutations") {
    Eigen::VectorXd b = vec2(0.0, 0.0);
    RhsGeneratorConfig cfg;
    cfg.mode = RhsMode::LatinHypercube;
    cfg.horizon = 100;
    cfg.perturbed_rows = {0, 1};
    cfg.lo = {0.0, 0.0};
    cfg.hi = {1.0, 1.0};
    cfg.seed = 11;
    auto seq = sample_lhs(cfg, b);
    // Spearman rank correlation between the two rows.
    auto ranks = [&](int k) {
        std::vector<int> idx(100), r(100);
        for (int i = 0; i < 100; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int c) { return seq[a][k] < seq[c][k]; });
        for (int i = 0; i < 100; ++i) r[idx[i]] = i;
        return r;
    };
    auto r0 = ranks(0), r1 = ranks(1);
    double d2 = 0.0;
    for (int i = 0; i < 100; ++i) d2 += (r0[i] - r1[i]) * (r0[i] - r1[i]);
    double rho = 1.0 - 6.0 * d2 / (100.0 * (100.0 * 100.0 - 1.0));
    CHECK(std::abs(rho) < 0.3);
}

TEST_CASE("sampling is reproducible and mode mismatch throws") {
    Eigen::VectorXd b = vec2(5.0, 7.0);
    auto cfg = default_rhs_config(b, {0, 1}, 20, 42);
    auto s1 = sample_rhs(cfg, b);
    auto s2 = sample_rhs(cfg, b);
    for (int i = 0; i < 20; ++i) CHECK((s1[i].array() == s2[i].array()).all());
    CHECK_THROWS_AS(sample_lhs(cfg, b), ConfigError);
    cfg.mode = RhsMode::LatinHypercube;
    CHECK_THROWS_AS(sample_time_series(cfg, b), ConfigError);
    auto l1 = sample_rhs(cfg, b);
    auto l2 = sample_rhs(cfg, b);
    for (int i = 0; i < 20; ++i) CHECK((l1[i].array() == l2[i].array()).all());
}
