#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pldc/errors.hpp"

namespace pldc {

enum class RhsMode { TimeSeries, LatinHypercube };

// Generator for first-stage right-hand-side sequences. Rows not listed in
// perturbed_rows stay bit-identical to b_nominal.
struct RhsGeneratorConfig {
    RhsMode mode = RhsMode::TimeSeries;
    // TimeSeries: b_k(i) = a0_k * i + a1_k + Normal(0, sigma_k^2), i = 1..horizon.
    std::vector<double> a0, a1, sigma;   // sized m1 (entries for unperturbed rows ignored)
    // LatinHypercube: one stratified draw per subinterval of [lo_k, hi_k].
    std::vector<double> lo, hi;
    bool lhs_midpoint = false;           // midpoint-of-interval placement (debugging)
    int horizon = 1;
    std::uint64_t seed = 0;
    std::vector<int> perturbed_rows;
};

// Defaults derived from the nominal rhs: a1 = b_k, a0 = 1e-3 |b_k|, sigma = 2e-2 |b_k|;
// LHS range is the nominal +/- 3 sigma band of the same scale.
RhsGeneratorConfig default_rhs_config(const Eigen::VectorXd& b_nominal,
                                      const std::vector<int>& perturbed_rows, int horizon,
                                      std::uint64_t seed, RhsMode mode = RhsMode::TimeSeries);

std::vector<Eigen::VectorXd> sample_time_series(const RhsGeneratorConfig& cfg,
                                                const Eigen::VectorXd& b_nominal);

std::vector<Eigen::VectorXd> sample_lhs(const RhsGeneratorConfig& cfg,
                                        const Eigen::VectorXd& b_nominal);

// Dispatch on cfg.mode.
std::vector<Eigen::VectorXd> sample_rhs(const RhsGeneratorConfig& cfg,
                                        const Eigen::VectorXd& b_nominal);

}  // namespace pldc
