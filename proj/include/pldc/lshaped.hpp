#pragma once

#include <vector>

#include "pldc/cuts.hpp"
#include "pldc/instance.hpp"

namespace pldc {

struct LShapedOptions {
    double tol_gap = 1e-9;      // relative bound-gap stopping criterion
    double tol_active = 1e-6;   // absolute slack below which a cut counts as active
    int max_iter = 500;
    int solve_id = 0;           // stamped into emitted cuts
};

struct LShapedResult {
    Eigen::VectorXd x_star;
    double eta_star = 0.0;
    double v_star = 0.0;
    std::vector<Cut> cuts_all;
    std::vector<Cut> cuts_active;
    int iterations = 0;
    bool iter_limit = false;
};

// Exact single aggregated optimality cut at x:
// alpha = sum_w p_w pi(w)'h(w), beta = -sum_w p_w T(w)'pi(w).
Cut aggregate_cut(const TwoStageInstance& inst, const Eigen::VectorXd& x);

// Shared-solver variant so dual-simplex warm starts persist across calls.
Cut aggregate_cut(const TwoStageInstance& inst, SubproblemSolver& solver,
                  const Eigen::VectorXd& x);

// Single-cut L-Shaped (Benders) method at rhs b. Stops when
// upper - lower <= tol_gap * (1 + |lower|). Throws MasterInfeasible when
// b is outside pos(A).
LShapedResult solve_lshaped(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                            const LShapedOptions& opts = {});

}  // namespace pldc
