#include "pldc/sd.hpp"

#include <cmath>

#include "pldc/qp.hpp"
#include "pldc/simplex.hpp"
#include "pldc/stats.hpp"

namespace pldc {

namespace {

constexpr std::uint64_t kScenarioStream = 17;

int draw_scenario(const TwoStageInstance& inst, std::uint64_t seed, std::uint64_t counter) {
    double u = counter_uniform(seed, kScenarioStream, counter);
    double acc = 0.0;
    const int S = static_cast<int>(inst.scenarios.size());
    for (int s = 0; s < S; ++s) {
        acc += inst.scenarios[s].probability;
        if (u <= acc) return s;
    }
    return S - 1;
}

// Best stored dual vertex for scenario s at x (lowest index on ties).
struct VertexPick {
    double value;
    int index;
};

VertexPick best_vertex(const std::vector<Eigen::VectorXd>& vertices, const Scenario& sc,
                       const Eigen::VectorXd& x) {
    Eigen::VectorXd rhs = sc.h - sc.T * x;
    VertexPick pick{-kInf, -1};
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
        double val = vertices[v].dot(rhs);
        if (val > pick.value + 1e-15) pick = {val, v};
    }
    return pick;
}

}  // namespace

SdResult solve_sd(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                  const SdOptions& opts) {
    if (b.size() != inst.m1()) throw DimensionMismatch("b size != m1");
    const int S = static_cast<int>(inst.scenarios.size());

    auto base = solve_lp(LinearProgram(inst.c, inst.A, b));
    if (base.status == LpStatus::Infeasible)
        throw MasterInfeasible("first-stage constraints infeasible at this rhs");
    if (base.status == LpStatus::Unbounded)
        throw NumericalError("first-stage LP unbounded; feasible region not compact");

    SubproblemSolver solver(inst);
    SdResult res;
    Eigen::VectorXd candidate = base.x;
    Eigen::VectorXd incumbent = base.x;
    std::vector<Eigen::VectorXd> vertices;
    std::vector<int> counts(S, 0);
    std::vector<Cut> cuts;
    int incumbent_cut = -1;  // slot refreshed every iteration
    std::vector<double> value_history;

    // Sample-average of the max-of-vertices approximation.
    auto approx_value = [&](const Eigen::VectorXd& x, int k) {
        double sum = 0.0;
        for (int s = 0; s < S; ++s)
            if (counts[s] > 0) sum += counts[s] * best_vertex(vertices, inst.scenarios[s], x).value;
        return inst.c.dot(x) + sum / k;
    };
    auto form_cut = [&](const Eigen::VectorXd& x, int k, int iteration) {
        Cut cut;
        cut.kind = CutKind::SdInSample;
        cut.solve_id = opts.solve_id;
        cut.iteration = iteration;
        cut.alpha = 0.0;
        cut.beta = Eigen::VectorXd::Zero(inst.d_x());
        for (int s = 0; s < S; ++s) {
            if (counts[s] == 0) continue;
            const auto& sc = inst.scenarios[s];
            int v = best_vertex(vertices, sc, x).index;
            cut.alpha += counts[s] * vertices[v].dot(sc.h);
            cut.beta -= counts[s] * (sc.T.transpose() * vertices[v]);
        }
        cut.alpha /= k;
        cut.beta /= k;
        return cut;
    };

    for (int k = 1; k <= opts.max_iter; ++k) {
        res.iterations = k;
        int obs = draw_scenario(inst, opts.seed, static_cast<std::uint64_t>(k));
        res.observations.push_back(obs);
        ++counts[obs];

        // The single exact subproblem solve of this iteration.
        auto sub = solver.solve(candidate, obs);
        bool fresh = true;
        for (const auto& v : vertices)
            if ((v - sub.duals).lpNorm<Eigen::Infinity>() <= 1e-10) {
                fresh = false;
                break;
            }
        if (fresh) vertices.push_back(sub.duals);

        // Rescale old cuts from (k-1)- to k-observation averages; the recourse
        // is nonnegative here, so the scaled cuts stay valid lower bounds.
        double ratio = static_cast<double>(k - 1) / k;
        for (auto& cut : cuts) {
            cut.alpha *= ratio;
            cut.beta *= ratio;
        }

        cuts.push_back(form_cut(candidate, k, k));
        Cut inc_cut = form_cut(incumbent, k, k);
        if (incumbent_cut < 0) {
            cuts.push_back(std::move(inc_cut));
            incumbent_cut = static_cast<int>(cuts.size()) - 1;
        } else {
            cuts[incumbent_cut] = std::move(inc_cut);
        }

        auto master = solve_regularized_master(inst.c, inst.A, b, cuts, incumbent,
                                               opts.sigma_reg);

        double f_inc = approx_value(incumbent, k);
        double f_cand = approx_value(master.x, k);
        double model_cand = inst.c.dot(master.x) + master.eta;
        double predicted = f_inc - model_cand;
        if (predicted > 0.0 && f_inc - f_cand >= opts.gamma * predicted) incumbent = master.x;
        candidate = master.x;

        value_history.push_back(approx_value(incumbent, k));
        if (k >= opts.min_iter && k > opts.stall_window) {
            double now = value_history[k - 1];
            double then = value_history[k - 1 - opts.stall_window];
            if (std::abs(now - then) <= opts.stall_tol * (1.0 + std::abs(now))) break;
        }
    }

    res.incumbent = incumbent;
    res.value_estimate = value_history.empty() ? inst.c.dot(incumbent) : value_history.back();
    res.dual_vertices = vertices;
    double envelope = -kInf;
    for (const auto& cut : cuts) envelope = std::max(envelope, cut.value_at(incumbent));
    for (const auto& cut : cuts)
        if (envelope - cut.value_at(incumbent) <= 1e-6) res.cuts_active.push_back(cut);
    return res;
}

Cut out_of_sample_cut(const TwoStageInstance& inst, const Eigen::VectorXd& x_hat,
                      const std::vector<int>& sample) {
    if (sample.empty()) throw ValidationError("empty out-of-sample draw");
    const int S = static_cast<int>(inst.scenarios.size());
    std::vector<int> counts(S, 0);
    for (int s : sample) {
        if (s < 0 || s >= S) throw ValidationError("scenario index out of range");
        ++counts[s];
    }
    SubproblemSolver solver(inst);
    Cut cut;
    cut.kind = CutKind::OutOfSample;
    cut.alpha = 0.0;
    cut.beta = Eigen::VectorXd::Zero(inst.d_x());
    const double N = static_cast<double>(sample.size());
    for (int s = 0; s < S; ++s) {
        if (counts[s] == 0) continue;
        const auto& sc = inst.scenarios[s];
        auto sub = solver.solve(x_hat, s);  // exact duals at x_hat
        cut.alpha += counts[s] * sub.duals.dot(sc.h) / N;
        cut.beta -= counts[s] * (sc.T.transpose() * sub.duals) / N;
    }
    return cut;
}

std::vector<Cut> build_oos_bundle(
    const TwoStageInstance& inst,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& incumbents, int N,
    std::uint64_t seed) {
    if (N < 1) throw ValidationError("out-of-sample size must be >= 1");
    auto sample = draw_scenario_sample(inst, N, seed);
    std::vector<Cut> cuts;
    for (int i = 0; i < static_cast<int>(incumbents.size()); ++i) {
        Cut cut = out_of_sample_cut(inst, incumbents[i].second, sample);
        cut.solve_id = i;
        cuts.push_back(std::move(cut));
    }
    return dedup_cuts(cuts, 1e-12);
}

}  // namespace pldc
