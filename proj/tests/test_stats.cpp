#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pldc/stats.hpp"

using namespace pldc;

TEST_CASE("normal quantiles against table values") {
    CHECK(normal_inv_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_inv_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal_inv_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(normal_inv_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-9));
    CHECK(normal_inv_cdf(0.001) == doctest::Approx(-3.090232306167813).epsilon(1e-8));
}

TEST_CASE("student-t critical values against table values") {
    // Standard two-sided 5% table: t_{0.025, dof}.
    CHECK(t_critical(1, 0.025) == doctest::Approx(12.706).epsilon(1e-3));
    CHECK(t_critical(10, 0.025) == doctest::Approx(2.2281).epsilon(1e-3));
    CHECK(t_critical(29, 0.025) == doctest::Approx(2.0452).epsilon(1e-3));
    CHECK(t_critical(100, 0.05) == doctest::Approx(1.6602).epsilon(1e-3));
    // p-value is consistent with the critical value.
    double t = t_critical(29, 0.025);
    CHECK(t_two_sided_pvalue(29, t) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("ci half width is exactly z over 2 sqrt n") {
    for (int n : {4, 25, 100, 10000})
        CHECK(ci_half_width(1.96, n) == 1.96 / (2.0 * std::sqrt(static_cast<double>(n))));
    CHECK(ci_half_width(1.96, 100) == doctest::Approx(0.098));
}

TEST_CASE("counter uniform stream is deterministic and roughly uniform") {
    CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
    CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
    CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
    double sum = 0.0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        double u = counter_uniform(7, 0, i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / N == doctest::Approx(0.5).epsilon(5e-3));
}
