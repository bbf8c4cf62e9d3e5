#pragma once

#include <vector>

#include <Eigen/Dense>

namespace pldc {

enum class CutKind { Exact, SdInSample, OutOfSample };

// Affine lower bound alpha + beta'x on an expected (or sample-average) recourse
// function.
struct Cut {
    double alpha = 0.0;
    Eigen::VectorXd beta;
    CutKind kind = CutKind::Exact;
    int solve_id = -1;    // which solve produced it
    int iteration = -1;   // iteration within that solve

    double value_at(const Eigen::VectorXd& x) const { return alpha + beta.dot(x); }
};

// Drop cuts whose (alpha, beta) match an earlier cut within tol (infinity norm).
std::vector<Cut> dedup_cuts(const std::vector<Cut>& cuts, double tol = 1e-12);

}  // namespace pldc
