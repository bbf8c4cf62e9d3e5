#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <vector>

#include "pldc/errors.hpp"

namespace pldc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Engine-internal tolerances. The looser policy-layer tolerances live in
// policy.hpp so that feasibility checks there remain meaningful.
inline constexpr double kTolFeas = 1e-9;
inline constexpr double kTolOpt = 1e-9;

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Standard-form LP: min c'x s.t. Ax = b, lower <= x <= upper.
// The constraint matrix must have full row rank; rows <= columns.
class LinearProgram {
public:
    LinearProgram(Eigen::VectorXd objective, Eigen::MatrixXd constraint_matrix,
                  Eigen::VectorXd rhs, Eigen::VectorXd var_lower = {},
                  Eigen::VectorXd var_upper = {});

    int num_vars() const { return static_cast<int>(objective_.size()); }
    int num_cons() const { return static_cast<int>(rhs_.size()); }

    const Eigen::VectorXd& objective() const { return objective_; }
    const Eigen::MatrixXd& constraint_matrix() const { return matrix_; }
    const Eigen::VectorXd& rhs() const { return rhs_; }
    const Eigen::VectorXd& var_lower() const { return lower_; }
    const Eigen::VectorXd& var_upper() const { return upper_; }

private:
    Eigen::VectorXd objective_;
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd rhs_;
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    std::vector<int> basis;  // ascending basic-variable indices, |basis| = num_cons at Optimal
    Eigen::VectorXd duals;   // one per constraint
    int pivots = 0;
};

}  // namespace pldc
