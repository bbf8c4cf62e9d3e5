#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pldc/linear_program.hpp"

namespace pldc {

struct Scenario {
    double probability = 0.0;
    Eigen::VectorXd h;   // second-stage RHS
    Eigen::MatrixXd T;   // technology matrix (m2 x d_x)
};

// Two-stage stochastic LP with fixed recourse:
//   min c'x + E[Q(x,w)]  s.t. Ax = b, x >= 0
//   Q(x,w) = min q'y     s.t. Wy = h(w) - T(w)x, y >= 0
struct TwoStageInstance {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b_nominal;
    Eigen::VectorXd q;
    Eigen::MatrixXd W;
    std::vector<Scenario> scenarios;
    std::vector<int> perturbed_rows;

    int d_x() const { return static_cast<int>(c.size()); }
    int m1() const { return static_cast<int>(b_nominal.size()); }
    int d_y() const { return static_cast<int>(q.size()); }
    int m2() const { return static_cast<int>(W.rows()); }

    // Probability sum and dimension conformity; throws ValidationError.
    void validate() const;
};

struct SyntheticSpec {
    int d_x = 4;
    int m1 = 2;
    int m2 = 3;
    int num_scenarios = 16;
    std::uint64_t seed = 0;
};

// Desk-scale synthetic instance satisfying A1-A4: all-positive A (compact X),
// b_nominal strictly inside pos(A), and a +/- identity slack block in W with
// positive costs so every subproblem is feasible and bounded.
TwoStageInstance generate_synthetic(const SyntheticSpec& spec);

LinearProgram build_extensive_form(const TwoStageInstance& inst, const Eigen::VectorXd& b);

struct SubproblemResult {
    double value = 0.0;
    Eigen::VectorXd duals;  // optimal subproblem duals, one per second-stage row
};

SubproblemResult solve_subproblem(const TwoStageInstance& inst, const Eigen::VectorXd& x,
                                  int scenario_index);

// Basis-caching subproblem solver: the recourse LP's matrix and costs are
// fixed, so rhs changes warm-start from the previous basis per scenario.
class SubproblemSolver {
public:
    explicit SubproblemSolver(const TwoStageInstance& inst);
    SubproblemResult solve(const Eigen::VectorXd& x, int scenario_index);
    // Solve at an explicit (h, T) pair outside the instance's scenario list.
    SubproblemResult solve_scenario(const Eigen::VectorXd& x, const Scenario& sc, int hint_slot);

private:
    const TwoStageInstance& inst_;
    LinearProgram lp_;
    std::vector<std::vector<int>> hints_;
};

double first_stage_objective(const TwoStageInstance& inst, const Eigen::VectorXd& x);

struct SampleAverage {
    double value = 0.0;                     // c'x + mean recourse
    std::vector<double> per_observation;    // Q(x, w_t) per draw
};

SampleAverage sample_average_objective(const TwoStageInstance& inst, const Eigen::VectorXd& x,
                                       const std::vector<int>& sample);

// Draw scenario indices i.i.d. from the instance's probabilities.
std::vector<int> draw_scenario_sample(const TwoStageInstance& inst, int count, std::uint64_t seed);

}  // namespace pldc
