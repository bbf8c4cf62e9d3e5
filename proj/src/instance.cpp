#include "pldc/instance.hpp"

#include <cmath>
#include <random>

#include "pldc/simplex.hpp"

namespace pldc {

void TwoStageInstance::validate() const {
    if (A.rows() != m1() || A.cols() != d_x()) throw ValidationError("A shape mismatch");
    if (W.cols() != d_y()) throw ValidationError("W shape mismatch");
    if (scenarios.empty()) throw ValidationError("instance has no scenarios");
    double psum = 0.0;
    for (const auto& sc : scenarios) {
        if (sc.probability <= 0.0 || sc.probability > 1.0)
            throw ValidationError("scenario probability outside (0,1]");
        if (sc.h.size() != m2()) throw ValidationError("scenario h size mismatch");
        if (sc.T.rows() != m2() || sc.T.cols() != d_x())
            throw ValidationError("scenario T shape mismatch");
        psum += sc.probability;
    }
    if (std::abs(psum - 1.0) > 1e-12) throw ValidationError("scenario probabilities do not sum to 1");
    for (int k : perturbed_rows)
        if (k < 0 || k >= m1()) throw ValidationError("perturbed row index out of range");
}

TwoStageInstance generate_synthetic(const SyntheticSpec& spec) {
    if (spec.d_x < 1 || spec.m1 < 1 || spec.m2 < 1 || spec.num_scenarios < 1)
        throw ValidationError("synthetic spec dimensions must be positive");
    if (spec.m1 > spec.d_x) throw ValidationError("m1 must not exceed d_x");

    std::mt19937_64 rng(spec.seed);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    TwoStageInstance inst;
    inst.A.resize(spec.m1, spec.d_x);
    for (int i = 0; i < spec.m1; ++i)
        for (int j = 0; j < spec.d_x; ++j) inst.A(i, j) = uni(0.5, 2.0);
    inst.c.resize(spec.d_x);
    for (int j = 0; j < spec.d_x; ++j) inst.c[j] = uni(1.0, 5.0);

    Eigen::VectorXd x0(spec.d_x);
    for (int j = 0; j < spec.d_x; ++j) x0[j] = uni(0.5, 2.0);
    inst.b_nominal = inst.A * x0;

    const int g = std::max(spec.d_x, 2);  // recourse decision columns before the slack block
    const int d_y = g + 2 * spec.m2;
    Eigen::MatrixXd G(spec.m2, g);
    for (int i = 0; i < spec.m2; ++i)
        for (int j = 0; j < g; ++j) G(i, j) = uni(0.2, 1.0);
    inst.W.resize(spec.m2, d_y);
    inst.W << G, Eigen::MatrixXd::Identity(spec.m2, spec.m2),
        -Eigen::MatrixXd::Identity(spec.m2, spec.m2);
    inst.q.resize(d_y);
    for (int j = 0; j < g; ++j) inst.q[j] = uni(0.5, 2.0);
    for (int j = g; j < d_y; ++j) inst.q[j] = uni(4.0, 8.0);

    Eigen::MatrixXd T0(spec.m2, spec.d_x);
    for (int i = 0; i < spec.m2; ++i)
        for (int j = 0; j < spec.d_x; ++j) T0(i, j) = uni(0.2, 1.0);
    Eigen::VectorXd h0 = T0 * x0;
    for (int i = 0; i < spec.m2; ++i) h0[i] += uni(0.5, 1.5);

    inst.scenarios.resize(spec.num_scenarios);
    std::vector<double> weights(spec.num_scenarios);
    for (int s = 0; s < spec.num_scenarios; ++s) weights[s] = uni(0.5, 1.5);
    double wsum = 0.0;
    for (double w : weights) wsum += w;

    for (int s = 0; s < spec.num_scenarios; ++s) {
        Scenario sc;
        sc.T = T0;
        for (int i = 0; i < spec.m2; ++i)
            for (int j = 0; j < spec.d_x; ++j) sc.T(i, j) *= 1.0 + 0.2 * uni(-1.0, 1.0);
        sc.h = h0;
        for (int i = 0; i < spec.m2; ++i) sc.h[i] += uni(-0.5, 0.5);
        sc.probability = weights[s] / wsum;
        inst.scenarios[s] = std::move(sc);
    }
    // Pin the sum to exactly 1.
    double partial = 0.0;
    for (int s = 0; s + 1 < spec.num_scenarios; ++s) partial += inst.scenarios[s].probability;
    inst.scenarios.back().probability = 1.0 - partial;

    inst.perturbed_rows.resize(spec.m1);
    for (int k = 0; k < spec.m1; ++k) inst.perturbed_rows[k] = k;
    inst.validate();
    return inst;
}

LinearProgram build_extensive_form(const TwoStageInstance& inst, const Eigen::VectorXd& b) {
    if (b.size() != inst.m1()) throw DimensionMismatch("b size != m1");
    const int S = static_cast<int>(inst.scenarios.size());
    const int nv = inst.d_x() + S * inst.d_y();
    const int nc = inst.m1() + S * inst.m2();

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nc, nv);
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd rhs(nc);

    M.topLeftCorner(inst.m1(), inst.d_x()) = inst.A;
    rhs.head(inst.m1()) = b;
    obj.head(inst.d_x()) = inst.c;
    for (int s = 0; s < S; ++s) {
        const auto& sc = inst.scenarios[s];
        int r0 = inst.m1() + s * inst.m2();
        int c0 = inst.d_x() + s * inst.d_y();
        M.block(r0, 0, inst.m2(), inst.d_x()) = sc.T;
        M.block(r0, c0, inst.m2(), inst.d_y()) = inst.W;
        rhs.segment(r0, inst.m2()) = sc.h;
        obj.segment(c0, inst.d_y()) = sc.probability * inst.q;
    }
    return LinearProgram(std::move(obj), std::move(M), std::move(rhs));
}

SubproblemSolver::SubproblemSolver(const TwoStageInstance& inst)
    : inst_(inst),
      lp_(inst.q, inst.W, inst.scenarios.front().h),
      hints_(inst.scenarios.size()) {}

SubproblemResult SubproblemSolver::solve(const Eigen::VectorXd& x, int scenario_index) {
    return solve_scenario(x, inst_.scenarios.at(scenario_index), scenario_index);
}

SubproblemResult SubproblemSolver::solve_scenario(const Eigen::VectorXd& x, const Scenario& sc,
                                                  int hint_slot) {
    if (x.size() != inst_.d_x()) throw DimensionMismatch("x size != d_x");
    Eigen::VectorXd rhs = sc.h - sc.T * x;
    std::optional<std::vector<int>> hint;
    if (hint_slot >= 0 && !hints_[hint_slot].empty()) hint = hints_[hint_slot];
    LpSolution sol = resolve_with_rhs(lp_, rhs, hint);
    if (sol.status == LpStatus::Infeasible)
        throw SubproblemInfeasible("second-stage subproblem infeasible");
    if (sol.status == LpStatus::Unbounded)
        throw SubproblemUnbounded("second-stage subproblem unbounded");
    if (hint_slot >= 0) hints_[hint_slot] = sol.basis;
    return {sol.objective, sol.duals};
}

SubproblemResult solve_subproblem(const TwoStageInstance& inst, const Eigen::VectorXd& x,
                                  int scenario_index) {
    SubproblemSolver solver(inst);
    return solver.solve(x, scenario_index);
}

double first_stage_objective(const TwoStageInstance& inst, const Eigen::VectorXd& x) {
    SubproblemSolver solver(inst);
    double v = inst.c.dot(x);
    for (int s = 0; s < static_cast<int>(inst.scenarios.size()); ++s)
        v += inst.scenarios[s].probability * solver.solve(x, s).value;
    return v;
}

SampleAverage sample_average_objective(const TwoStageInstance& inst, const Eigen::VectorXd& x,
                                       const std::vector<int>& sample) {
    if (sample.empty()) throw ValidationError("empty sample");
    SubproblemSolver solver(inst);
    SampleAverage out;
    out.per_observation.reserve(sample.size());
    double sum = 0.0;
    for (int idx : sample) {
        double qv = solver.solve(x, idx).value;
        out.per_observation.push_back(qv);
        sum += qv;
    }
    out.value = inst.c.dot(x) + sum / static_cast<double>(sample.size());
    return out;
}

std::vector<int> draw_scenario_sample(const TwoStageInstance& inst, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<int> out;
    out.reserve(count);
    const int S = static_cast<int>(inst.scenarios.size());
    for (int t = 0; t < count; ++t) {
        double u = uni(rng), acc = 0.0;
        int pick = S - 1;
        for (int s = 0; s < S; ++s) {
            acc += inst.scenarios[s].probability;
            if (u <= acc) {
                pick = s;
                break;
            }
        }
        out.push_back(pick);
    }
    return out;
}

}  // namespace pldc
