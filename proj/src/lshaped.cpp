#include "pldc/lshaped.hpp"

#include <cmath>

#include "pldc/policy.hpp"
#include "pldc/simplex.hpp"

namespace pldc {

Cut aggregate_cut(const TwoStageInstance& inst, SubproblemSolver& solver,
                  const Eigen::VectorXd& x) {
    Cut cut;
    cut.kind = CutKind::Exact;
    cut.alpha = 0.0;
    cut.beta = Eigen::VectorXd::Zero(inst.d_x());
    for (int s = 0; s < static_cast<int>(inst.scenarios.size()); ++s) {
        const auto& sc = inst.scenarios[s];
        auto res = solver.solve(x, s);
        cut.alpha += sc.probability * res.duals.dot(sc.h);
        cut.beta -= sc.probability * (sc.T.transpose() * res.duals);
    }
    return cut;
}

Cut aggregate_cut(const TwoStageInstance& inst, const Eigen::VectorXd& x) {
    SubproblemSolver solver(inst);
    return aggregate_cut(inst, solver, x);
}

LShapedResult solve_lshaped(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                            const LShapedOptions& opts) {
    if (b.size() != inst.m1()) throw DimensionMismatch("b size != m1");

    // Iteration 0: plain first-stage LP (no cuts yet, eta is unbounded below).
    auto base = solve_lp(LinearProgram(inst.c, inst.A, b));
    if (base.status == LpStatus::Infeasible)
        throw MasterInfeasible("first-stage constraints infeasible at this rhs");
    if (base.status == LpStatus::Unbounded)
        throw NumericalError("first-stage LP unbounded; feasible region not compact");

    SubproblemSolver solver(inst);
    LShapedResult res;
    Eigen::VectorXd x = base.x;
    double best_upper = kInf;
    Eigen::VectorXd best_x = x;
    double lower = -kInf;

    for (int it = 1; it <= opts.max_iter; ++it) {
        res.iterations = it;
        Cut cut = aggregate_cut(inst, solver, x);
        cut.solve_id = opts.solve_id;
        cut.iteration = it;
        double upper = inst.c.dot(x) + cut.value_at(x);  // cut is tight at x
        if (upper < best_upper) {
            best_upper = upper;
            best_x = x;
        }
        res.cuts_all.push_back(std::move(cut));

        auto master = solve_lp(build_consolidated_master(inst.c, inst.A, res.cuts_all, b));
        if (master.status != LpStatus::Optimal)
            throw NumericalError("L-Shaped master solve failed");
        lower = master.objective;
        if (best_upper - lower <= opts.tol_gap * (1.0 + std::abs(lower))) break;
        x = master.x.head(inst.d_x());
        if (it == opts.max_iter) res.iter_limit = true;
    }

    res.x_star = best_x;
    double eta = -kInf;
    for (const auto& c : res.cuts_all) eta = std::max(eta, c.value_at(best_x));
    res.eta_star = eta;
    res.v_star = inst.c.dot(best_x) + eta;
    for (const auto& c : res.cuts_all)
        if (res.eta_star - c.value_at(best_x) <= opts.tol_active) res.cuts_active.push_back(c);
    return res;
}

}  // namespace pldc
