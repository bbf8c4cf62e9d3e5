#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pldc/linear_program.hpp"

namespace pldc {

// Dense revised primal simplex. Dantzig pricing with lowest-index ties,
// Bland's rule after 50*num_cons consecutive degenerate pivots. Deterministic:
// identical inputs yield bit-identical bases.
LpSolution solve_lp(const LinearProgram& lp);

// Re-solve with a new right-hand side. When hint_basis is supplied and stays
// primal feasible, the solution is read off without pivoting; otherwise a
// dual-simplex warm start runs from the hint (cold solve when absent).
LpSolution resolve_with_rhs(const LinearProgram& lp, const Eigen::VectorXd& new_rhs,
                            const std::optional<std::vector<int>>& hint_basis = std::nullopt);

// Brute-force test oracle: for each rhs, the lexicographically smallest basis
// among all feasible bases attaining the optimal objective. Assumes bounds
// [0, inf); guarded against combinatorial blowup.
std::map<std::vector<double>, std::vector<int>> enumerate_optimal_bases(
    const LinearProgram& lp, const std::vector<Eigen::VectorXd>& rhs_list);

// Oracle helper: minimum objective over all feasible bases, or nullopt when no
// basis is feasible (rhs outside pos(A)).
std::optional<double> brute_force_optimum(const LinearProgram& lp, const Eigen::VectorXd& rhs);

}  // namespace pldc
