#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pldc/cuts.hpp"
#include "pldc/instance.hpp"

namespace pldc {

struct SdOptions {
    double sigma_reg = 1.0;   // proximal weight
    double gamma = 0.2;       // incumbent update ratio
    int min_iter = 100;
    int max_iter = 1000;
    int stall_window = 50;
    double stall_tol = 1e-4;  // relative stall on the in-sample incumbent value
    std::uint64_t seed = 0;
    int solve_id = 0;
};

struct SdResult {
    Eigen::VectorXd incumbent;
    double value_estimate = 0.0;             // in-sample objective at the incumbent
    std::vector<Cut> cuts_active;            // SdInSample cuts active at the incumbent
    std::vector<Eigen::VectorXd> dual_vertices;
    std::vector<int> observations;           // drawn scenario indices
    int iterations = 0;
};

// Simplified Stochastic Decomposition: one sampled scenario and one exact
// subproblem solve per iteration, argmax cut formation over the stored dual
// vertices, (k-1)/k rescaling of older cuts, a proximal master, and a
// ratio-test incumbent update. Stops on a stalled incumbent value.
SdResult solve_sd(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                  const SdOptions& opts = {});

// Sample-average cut with exact duals at x_hat:
// alpha = (1/N) sum pi_t'h_t, beta = -(1/N) sum T_t'pi_t. Valid lower bound on
// the sample-average recourse at every x by weak duality.
Cut out_of_sample_cut(const TwoStageInstance& inst, const Eigen::VectorXd& x_hat,
                      const std::vector<int>& sample);

// One shared seeded sample, one cut per incumbent, dedup within 1e-12.
std::vector<Cut> build_oos_bundle(
    const TwoStageInstance& inst,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& incumbents, int N,
    std::uint64_t seed);

}  // namespace pldc
