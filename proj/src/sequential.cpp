#include "pldc/sequential.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "pldc/lshaped.hpp"
#include "pldc/sd.hpp"
#include "pldc/simplex.hpp"
#include "pldc/stats.hpp"

namespace pldc {

namespace {

constexpr std::uint64_t kBatchStreamBase = 1000;  // per-round batch-index stream
constexpr std::uint64_t kOosStream = 0x6f6f73;    // shared out-of-sample draw

bool point_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& x_hat, double eps_feas) {
    return (A * x_hat - b).lpNorm<Eigen::Infinity>() <= eps_feas &&
           x_hat.minCoeff() >= -eps_feas;
}

std::vector<double> key_of(const Eigen::VectorXd& b) {
    return std::vector<double>(b.data(), b.data() + b.size());
}

}  // namespace

FeasibilityStats feasibility_stats(const PLDCPolicy& policy, const Eigen::MatrixXd& A,
                                   const std::vector<Eigen::VectorXd>& batch, double eps_feas,
                                   double z_score) {
    if (batch.empty()) throw ValidationError("feasibility_stats: empty batch");
    FeasibilityStats fs;
    for (int i = 0; i < static_cast<int>(batch.size()); ++i) {
        auto out = apply_policy(policy, batch[i]);
        if (point_feasible(A, batch[i], out.x_hat, eps_feas)) fs.feasible_indices.push_back(i);
    }
    const int n = static_cast<int>(batch.size());
    fs.R = 1.0 - static_cast<double>(fs.feasible_indices.size()) / n;
    fs.ci_upper = fs.R + ci_half_width(z_score, n);
    return fs;
}

SuboptimalityStats suboptimality_stats_lshaped(const PLDCPolicy& policy,
                                               const TwoStageInstance& inst,
                                               const std::vector<Eigen::VectorXd>& feasible_batch,
                                               double eps_opt, double z_score,
                                               bool gap_absolute) {
    SuboptimalityStats st;
    if (feasible_batch.empty()) {
        st.ci_upper = std::numeric_limits<double>::infinity();
        return st;
    }
    int bad = 0;
    for (const auto& b : feasible_batch) {
        auto out = apply_policy(policy, b);
        auto ls = solve_lshaped(inst, b);
        double gap = first_stage_objective(inst, out.x_hat) - ls.v_star;
        double thresh = gap_absolute ? eps_opt : eps_opt * (1.0 + std::abs(ls.v_star));
        if (gap > thresh) ++bad;
    }
    const int m = static_cast<int>(feasible_batch.size());
    st.p = static_cast<double>(bad) / m;
    st.ci_upper = st.p + ci_half_width(z_score, m);
    return st;
}

HypothesisResult hypothesis_test_sd(const TwoStageInstance& inst, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& x_star, const Eigen::VectorXd& x_hat,
                                    int M, double nu, std::uint64_t seed) {
    (void)b;  // the candidate pair already encodes the rhs; kept for call-site clarity
    if (M < 2) throw ValidationError("hypothesis test needs at least two gap samples");
    auto sample = draw_scenario_sample(inst, M, seed);
    SubproblemSolver solver(inst);
    HypothesisResult res;
    res.m_used = M;
    Eigen::VectorXd gaps(M);
    double base = inst.c.dot(x_hat) - inst.c.dot(x_star);
    for (int t = 0; t < M; ++t) {
        double q_hat = solver.solve(x_hat, sample[t]).value;
        double q_star = solver.solve(x_star, sample[t]).value;
        gaps[t] = base + q_hat - q_star;
    }
    res.mean_gap = gaps.mean();
    if (gaps.lpNorm<Eigen::Infinity>() <= 1e-12) {
        res.accept = true;  // identical objectives on every common draw
        res.std_gap = 0.0;
        return res;
    }
    res.std_gap = std::sqrt((gaps.array() - res.mean_gap).square().sum() / (M - 1));
    if (res.std_gap <= 1e-14) {
        res.accept = std::abs(res.mean_gap) <= 1e-12;
        return res;
    }
    double t_stat = std::sqrt(static_cast<double>(M)) * std::abs(res.mean_gap) / res.std_gap;
    res.accept = t_stat <= t_critical(M - 1, nu / 2.0);
    return res;
}

SequentialResult run_sequential(const TwoStageInstance& inst, const SequentialConfig& cfg,
                                const TrainingDataset& initial_dataset) {
    if (initial_dataset.points.empty())
        throw ValidationError("sequential procedure needs a nonempty initial dataset");
    if (cfg.n0 < 1 || cfg.growth < 1.0 || cfg.min_rounds > cfg.max_rounds)
        throw ValidationError("invalid sequential configuration");

    std::vector<Eigen::VectorXd> pool;
    if (cfg.pool_size > 0) {
        RhsGeneratorConfig pc = cfg.rhs;
        pc.horizon = cfg.pool_size;
        pool = sample_rhs(pc, inst.b_nominal);
    }

    TrainingDataset dataset = initial_dataset;
    std::set<std::vector<double>> seen;
    for (const auto& pt : dataset.points) seen.insert(key_of(pt.b));

    auto refit = [&]() {
        PolicyOptions opts = cfg.policy;
        if (!opts.relaxed) {
            try {
                return fit_policy(inst.c, inst.A, dataset, opts);
            } catch (const TrainingInfeasible&) {
                opts.relaxed = true;  // fall back to the penalized-slack fit
            }
        }
        return fit_policy(inst.c, inst.A, dataset, opts);
    };

    SequentialResult result;
    result.policy = refit();

    // Shared draw for every out-of-sample cut appended in SD mode.
    std::vector<int> oos_sample;
    if (cfg.solver == SolverMode::SD)
        oos_sample = draw_scenario_sample(inst, cfg.oos_samples, cfg.seed + kOosStream);

    int n_t = cfg.n0;
    for (int t = 1; t <= cfg.max_rounds; ++t) {
        // Assemble the round's batch.
        std::vector<Eigen::VectorXd> batch;
        batch.reserve(n_t);
        if (cfg.pool_size > 0) {
            for (int i = 0; i < n_t; ++i) {
                double u = counter_uniform(cfg.seed, kBatchStreamBase + t, i);
                int idx = std::min(cfg.pool_size - 1, static_cast<int>(u * cfg.pool_size));
                batch.push_back(pool[idx]);
            }
        } else {
            RhsGeneratorConfig gc = cfg.rhs;
            gc.horizon = n_t;
            gc.seed = cfg.rhs.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t);
            batch = sample_rhs(gc, inst.b_nominal);
        }

        RoundRecord rec;
        rec.round = t;
        rec.batch_size = n_t;

        auto fs = feasibility_stats(result.policy, inst.A, batch, cfg.eps_feas, cfg.z_score);
        rec.infeasible_fraction = fs.R;
        rec.feas_ci_upper = fs.ci_upper;
        bool feas_ok = fs.ci_upper <= cfg.ci_tol;
        if (feas_ok && result.t_feas < 0) result.t_feas = t;

        std::set<std::vector<double>> feasible_keys;
        for (int i : fs.feasible_indices) feasible_keys.insert(key_of(batch[i]));

        // Points to append, keyed by rhs so a batch duplicate is solved once.
        std::map<std::vector<double>, Eigen::VectorXd> to_append;
        for (int i = 0; i < static_cast<int>(batch.size()); ++i)
            if (!feasible_keys.count(key_of(batch[i]))) to_append[key_of(batch[i])] = batch[i];

        bool opt_ok = false;
        if (feas_ok) {
            // Solve every feasible batch point exactly and measure suboptimality.
            int bad = 0;
            std::set<std::vector<double>> tested;
            int m_feas = 0;
            for (int i : fs.feasible_indices) {
                auto key = key_of(batch[i]);
                if (tested.count(key)) continue;  // repeated draw: same verdict
                tested.insert(key);
                ++m_feas;
                auto out = apply_policy(result.policy, batch[i]);
                bool suboptimal = false;
                if (cfg.solver == SolverMode::LShaped) {
                    auto ls = solve_lshaped(inst, batch[i]);
                    double gap = first_stage_objective(inst, out.x_hat) - ls.v_star;
                    double thresh = cfg.gap_absolute
                                        ? cfg.eps_opt
                                        : cfg.eps_opt * (1.0 + std::abs(ls.v_star));
                    suboptimal = gap > thresh;
                } else {
                    SdOptions so;
                    so.seed = cfg.seed + 0x51ed2701ULL * static_cast<std::uint64_t>(t) +
                              static_cast<std::uint64_t>(i);
                    auto sd = solve_sd(inst, batch[i], so);
                    // Grow the paired-gap sample until its variance is small
                    // relative to the mean gap scale, then run the t-test.
                    int M = cfg.m_test;
                    HypothesisResult ht;
                    while (true) {
                        ht = hypothesis_test_sd(inst, batch[i], sd.incumbent, out.x_hat, M,
                                                cfg.nu, so.seed + 1);
                        double var = ht.std_gap * ht.std_gap;
                        if (ht.std_gap == 0.0 || var < 0.01 * (std::abs(ht.mean_gap) + 1.0) ||
                            M >= cfg.m_test_max)
                            break;
                        M = std::min(2 * M, cfg.m_test_max);
                    }
                    suboptimal = !ht.accept;
                }
                if (suboptimal) {
                    ++bad;
                    to_append[key] = batch[i];
                }
            }
            rec.subopt_fraction = m_feas > 0 ? static_cast<double>(bad) / m_feas : 0.0;
            rec.opt_ci_upper =
                m_feas > 0 ? rec.subopt_fraction + ci_half_width(cfg.z_score, m_feas)
                           : std::numeric_limits<double>::infinity();
            opt_ok = rec.opt_ci_upper <= cfg.ci_tol;
            if (opt_ok && result.t_opt < 0) result.t_opt = t;
        }

        // Append the flagged points (never twice) with their cuts, then refit.
        int appended = 0;
        for (const auto& [key, b] : to_append) {
            if (seen.count(key)) continue;
            seen.insert(key);
            ++appended;
            TrainingPoint pt;
            pt.b = b;
            if (cfg.solver == SolverMode::LShaped) {
                auto ls = solve_lshaped(inst, b);
                pt.x_star = ls.x_star;
                pt.eta_star = ls.eta_star;
                pt.v_star = ls.v_star;
                pt.source = DataSource::LShaped;
                for (const auto& cut : ls.cuts_active) dataset.bundle.push_back(cut);
            } else {
                SdOptions so;
                so.seed = cfg.seed + 0x2c9277b5ULL * static_cast<std::uint64_t>(t) +
                          static_cast<std::uint64_t>(appended);
                auto sd = solve_sd(inst, b, so);
                Cut cut = out_of_sample_cut(inst, sd.incumbent, oos_sample);
                pt.x_star = sd.incumbent;
                pt.eta_star = cut.value_at(sd.incumbent);
                pt.v_star = inst.c.dot(sd.incumbent) + pt.eta_star;
                pt.source = DataSource::SD;
                dataset.bundle.push_back(std::move(cut));
            }
            dataset.points.push_back(std::move(pt));
        }
        if (appended > 0) {
            dataset.bundle = dedup_cuts(dataset.bundle, 1e-12);
            result.policy = refit();
        }
        rec.appended = appended;
        rec.cells = static_cast<int>(result.policy.cells.size());
        rec.bundle_size = static_cast<int>(result.policy.bundle.size());
        rec.training_size = static_cast<int>(dataset.points.size());
        result.history.push_back(rec);

        if (feas_ok && opt_ok && t >= cfg.min_rounds) {
            result.stopped = StopReason::Converged;
            return result;
        }
        n_t = static_cast<int>(std::ceil(cfg.growth * n_t));
    }
    result.stopped = StopReason::MaxRounds;
    return result;
}

}  // namespace pldc
