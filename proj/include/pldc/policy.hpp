#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pldc/cuts.hpp"
#include "pldc/linear_program.hpp"

namespace pldc {

// Policy-layer tolerances (looser than the engine's): feasibility is measured
// on ||A x - b||_inf and min(x), optimality as a relative gap.
inline constexpr double kPolicyFeasTol = 1e-6;
inline constexpr double kOptGapSmall = 5e-4;
inline constexpr double kOptGapLarge = 1e-2;

enum class DataSource { LShaped, SD };

struct TrainingPoint {
    Eigen::VectorXd b;
    Eigen::VectorXd x_star;
    double eta_star = 0.0;
    double v_star = 0.0;
    DataSource source = DataSource::LShaped;
};

struct TrainingDataset {
    std::vector<TrainingPoint> points;
    std::vector<Cut> bundle;  // union of active / out-of-sample cuts
};

// Group of training points whose consolidated-master solves share one optimal
// basis; the anchor is the lowest member index.
struct Cell {
    std::vector<int> basis_key;
    std::vector<int> members;
    int anchor = -1;
};

struct PolicyOptions {
    bool relaxed = false;
    double slack_weight = 1e3;       // objective weight on relaxation slacks
    bool cell_key_xeta = false;      // coarsen the basis key to (x, eta) indices
    bool prune_pairs = false;        // anchored pair subset instead of all ordered pairs
    bool canonicalize_targets = true;  // replace targets with the CM solve's optimum
    // Restrict the convexifying shifts z to be affine within each cell (slope
    // taken from the second max). Every solution of this restricted program
    // satisfies the full pair-constraint system, and the variable count drops
    // from O(points) to O(cells), which is what makes large training sets
    // tractable in the dense solver. Requires full basis keys.
    bool compact_z = false;
    double train_tol = 1e-6;
    std::size_t max_constraints = 50'000'000;  // guard on the pair-constraint count
};

// Piecewise-linear difference-of-convex policy b -> (x_hat, eta_hat).
// Row k of the output is
//   max_l [ u_l(k)'(b - b_l) + anchor_xeta_l(k) + z_{anchor_l}(k) ]
// - max_l [ v_l(k)'(b - b_l) + z_{anchor_l}(k) ].
// u, v have m1 + |bundle| columns; the trailing |bundle| (alpha-block) columns
// are identically zero because the evaluation differences cancel there.
struct PLDCPolicy {
    Eigen::VectorXd c;  // first-stage cost, used by corrected_objective
    std::vector<Cell> cells;
    std::vector<Eigen::VectorXd> anchor_b;     // per cell
    std::vector<Eigen::VectorXd> anchor_xeta;  // per cell, length d_x + 1
    std::vector<Eigen::MatrixXd> u, v;         // per cell, (d_x+1) x (m1 + |bundle|)
    std::vector<Eigen::VectorXd> z;            // per training point, length d_x + 1
    std::vector<Cut> bundle;
    bool relaxed = false;
    double max_train_slack = 0.0;
    double max_recovery_error = 0.0;
    std::uint64_t seed = 0;
    std::string source = "lshaped";

    int d_x() const { return cells.empty() ? 0 : static_cast<int>(anchor_xeta[0].size()) - 1; }
    int m1() const { return cells.empty() ? 0 : static_cast<int>(anchor_b[0].size()); }
};

struct PolicyOutput {
    Eigen::VectorXd x_hat;
    double eta_hat = 0.0;
};

// Standard-form LP over (x, eta, surplus): A x = b; -beta_j'x + eta - s_j = alpha_j;
// objective c'x + eta.
LinearProgram build_consolidated_master(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                        const std::vector<Cut>& bundle,
                                        const Eigen::VectorXd& b);

// Stacked CM right-hand side (b; alpha).
Eigen::VectorXd cm_rhs(const Eigen::VectorXd& b, const std::vector<Cut>& bundle);

struct CellAssignment {
    std::vector<Cell> cells;
    std::vector<Eigen::VectorXd> cm_xeta;  // per point: the CM solve's (x, eta)
};

// Solve the consolidated master at each training rhs (basis warm starts chained
// across points) and group identical basis keys into cells.
CellAssignment assign_cells(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                            const TrainingDataset& dataset, bool cell_key_xeta = false);

// Explicit standard-form training LP (all ordered pairs, all output rows).
// Intended for small fixtures and tests; fit_policy solves an equivalent
// row-decomposed form that scales to larger datasets.
LinearProgram build_training_lp(const TrainingDataset& dataset, const std::vector<Cell>& cells,
                                const PolicyOptions& opts = {});

PLDCPolicy fit_policy(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                      const TrainingDataset& dataset, const PolicyOptions& opts = {});

// Appendix-style baseline: one (u, v) block per training point (cells ignored).
PLDCPolicy fit_pointwise_baseline(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                  const TrainingDataset& dataset,
                                  const PolicyOptions& opts = {});

PolicyOutput apply_policy(const PLDCPolicy& policy, const Eigen::VectorXd& b);

// c'x_hat + max over bundle cuts of (alpha + beta'x_hat); lower bound on the
// true objective when the bundle holds exact cuts.
double corrected_objective(const PLDCPolicy& policy, const Eigen::VectorXd& x_hat);

void save_policy(const PLDCPolicy& policy, const std::string& path);
PLDCPolicy load_policy(const std::string& path);

}  // namespace pldc
