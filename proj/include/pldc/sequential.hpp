#pragma once

#include <cstdint>
#include <vector>

#include "pldc/instance.hpp"
#include "pldc/policy.hpp"
#include "pldc/rhs_sampling.hpp"

namespace pldc {

enum class SolverMode { LShaped, SD };
enum class StopReason { Converged, MaxRounds };

struct SequentialConfig {
    int n0 = 2;                 // initial batch size
    double growth = 1.1;        // batch growth factor per round
    double z_score = 1.96;
    double ci_tol = 1e-4;       // threshold on both CI upper bounds
    double eps_feas = kPolicyFeasTol;
    double eps_opt = kOptGapSmall;  // relative optimality gap threshold
    bool gap_absolute = false;      // restore the absolute-gap indicator
    double nu = 0.05;           // SD-mode test significance
    int m_test = 30;            // SD-mode starting gap-sample size
    int m_test_max = 240;
    int min_rounds = 20;
    int max_rounds = 80;
    SolverMode solver = SolverMode::LShaped;
    std::uint64_t seed = 0;
    int pool_size = 5000;       // 0 selects direct generator mode
    int oos_samples = 2000;     // N for SD out-of-sample cuts
    RhsGeneratorConfig rhs;     // pool / direct rhs generator
    PolicyOptions policy;       // training options (plain mode retried relaxed)
};

struct RoundRecord {
    int round = 0;
    int batch_size = 0;
    double infeasible_fraction = 0.0;
    double feas_ci_upper = 0.0;
    double subopt_fraction = -1.0;  // -1 when the round skipped the optimality step
    double opt_ci_upper = -1.0;
    int cells = 0;
    int bundle_size = 0;
    int training_size = 0;
    int appended = 0;
};

struct FeasibilityStats {
    double R = 0.0;        // infeasible fraction
    double ci_upper = 0.0; // R + z / (2 sqrt(n))
    std::vector<int> feasible_indices;
};

FeasibilityStats feasibility_stats(const PLDCPolicy& policy, const Eigen::MatrixXd& A,
                                   const std::vector<Eigen::VectorXd>& batch, double eps_feas,
                                   double z_score);

struct SuboptimalityStats {
    double p = 0.0;
    double ci_upper = 0.0;
};

// Exact-solver suboptimality: fraction of feasible points whose policy
// objective exceeds v*(b) by more than the (relative, by default) gap.
SuboptimalityStats suboptimality_stats_lshaped(const PLDCPolicy& policy,
                                               const TwoStageInstance& inst,
                                               const std::vector<Eigen::VectorXd>& feasible_batch,
                                               double eps_opt, double z_score,
                                               bool gap_absolute = false);

struct HypothesisResult {
    bool accept = true;
    double mean_gap = 0.0;
    double std_gap = 0.0;
    int m_used = 0;
};

// Paired t-test with common random numbers on the per-scenario objective gaps
// between x_star and x_hat; trivially accepts when every gap is zero.
HypothesisResult hypothesis_test_sd(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& x_star, const Eigen::VectorXd& x_hat,
                                    int M, double nu, std::uint64_t seed);

struct SequentialResult {
    PLDCPolicy policy;
    std::vector<RoundRecord> history;
    StopReason stopped = StopReason::MaxRounds;
    int t_feas = -1;  // first round with feasibility CI upper <= ci_tol
    int t_opt = -1;   // first round with optimality CI upper <= ci_tol
};

SequentialResult run_sequential(const TwoStageInstance& inst, const SequentialConfig& cfg,
                                const TrainingDataset& initial_dataset);

}  // namespace pldc
