#pragma once

#include <vector>

#include "pldc/cuts.hpp"
#include "pldc/linear_program.hpp"

namespace pldc {

struct QpResult {
    Eigen::VectorXd x;
    double eta = 0.0;
    double objective = 0.0;  // c'x + eta + (sigma/2)||x - x_hat||^2
};

// Proximal cutting-plane master:
//   min c'x + eta + (sigma/2)||x - x_hat||^2
//   s.t. A x = b, x >= 0, eta >= alpha_j + beta_j'x for all cuts.
// Solved with a primal active-set method started from the feasible point
// (x_hat, max_j cut_j(x_hat)); x_hat must satisfy A x_hat = b, x_hat >= 0.
QpResult solve_regularized_master(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b, const std::vector<Cut>& cuts,
                                  const Eigen::VectorXd& x_hat, double sigma_reg);

}  // namespace pldc
