#include "pldc/rhs_sampling.hpp"

#include <cmath>

#include "pldc/stats.hpp"

namespace pldc {

namespace {

void check_common(const RhsGeneratorConfig& cfg, const Eigen::VectorXd& b_nominal) {
    if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
    const int m = static_cast<int>(b_nominal.size());
    for (int k : cfg.perturbed_rows)
        if (k < 0 || k >= m) throw ConfigError("perturbed row index out of range");
}

// Deterministic Fisher-Yates permutation of 0..n-1 from the counter stream.
std::vector<int> seeded_permutation(int n, std::uint64_t seed, std::uint64_t stream) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
        double u = counter_uniform(seed, stream, static_cast<std::uint64_t>(i));
        int j = static_cast<int>(u * (i + 1));
        if (j > i) j = i;
        std::swap(p[i], p[j]);
    }
    return p;
}

}  // namespace

RhsGeneratorConfig default_rhs_config(const Eigen::VectorXd& b_nominal,
                                      const std::vector<int>& perturbed_rows, int horizon,
                                      std::uint64_t seed, RhsMode mode) {
    RhsGeneratorConfig cfg;
    cfg.mode = mode;
    cfg.horizon = horizon;
    cfg.seed = seed;
    cfg.perturbed_rows = perturbed_rows;
    const int m = static_cast<int>(b_nominal.size());
    cfg.a0.resize(m);
    cfg.a1.resize(m);
    cfg.sigma.resize(m);
    cfg.lo.resize(m);
    cfg.hi.resize(m);
    for (int k = 0; k < m; ++k) {
        double scale = std::abs(b_nominal[k]);
        cfg.a1[k] = b_nominal[k];
        cfg.a0[k] = 1e-3 * scale;
        cfg.sigma[k] = 2e-2 * scale;
        cfg.lo[k] = b_nominal[k] - 3.0 * cfg.sigma[k];
        cfg.hi[k] = b_nominal[k] + 3.0 * cfg.sigma[k];
    }
    return cfg;
}

std::vector<Eigen::VectorXd> sample_time_series(const RhsGeneratorConfig& cfg,
                                                const Eigen::VectorXd& b_nominal) {
    if (cfg.mode != RhsMode::TimeSeries) throw ConfigError("generator mode is not TimeSeries");
    check_common(cfg, b_nominal);
    const int m = static_cast<int>(b_nominal.size());
    if (static_cast<int>(cfg.a0.size()) != m || static_cast<int>(cfg.a1.size()) != m ||
        static_cast<int>(cfg.sigma.size()) != m)
        throw ConfigError("time-series parameter vectors must match rhs dimension");
    for (int k : cfg.perturbed_rows)
        if (cfg.sigma[k] < 0.0) throw ConfigError("sigma must be nonnegative");

    std::vector<Eigen::VectorXd> out(cfg.horizon, b_nominal);
    for (int i = 0; i < cfg.horizon; ++i) {
        for (int k : cfg.perturbed_rows) {
            double e = 0.0;
            if (cfg.sigma[k] > 0.0)
                e = cfg.sigma[k] *
                    normal_inv_cdf(counter_uniform(cfg.seed, static_cast<std::uint64_t>(k),
                                                   static_cast<std::uint64_t>(i)));
            out[i][k] = cfg.a0[k] * (i + 1) + cfg.a1[k] + e;
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> sample_lhs(const RhsGeneratorConfig& cfg,
                                        const Eigen::VectorXd& b_nominal) {
    if (cfg.mode != RhsMode::LatinHypercube)
        throw ConfigError("generator mode is not LatinHypercube");
    check_common(cfg, b_nominal);
    const int m = static_cast<int>(b_nominal.size());
    if (static_cast<int>(cfg.lo.size()) != m || static_cast<int>(cfg.hi.size()) != m)
        throw ConfigError("LHS range vectors must match rhs dimension");
    for (int k : cfg.perturbed_rows)
        if (cfg.lo[k] > cfg.hi[k]) throw ConfigError("LHS range has lo > hi");

    const int T = cfg.horizon;
    std::vector<Eigen::VectorXd> out(T, b_nominal);
    for (int k : cfg.perturbed_rows) {
        // Independent permutation per row pairs the strata across rows.
        auto perm = seeded_permutation(T, cfg.seed, 2 * static_cast<std::uint64_t>(k) + 1);
        double width = (cfg.hi[k] - cfg.lo[k]) / T;
        for (int i = 0; i < T; ++i) {
            int cell = perm[i];
            double frac = cfg.lhs_midpoint
                              ? 0.5
                              : counter_uniform(cfg.seed, 2 * static_cast<std::uint64_t>(k),
                                                static_cast<std::uint64_t>(i));
            out[i][k] = cfg.lo[k] + (cell + frac) * width;
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> sample_rhs(const RhsGeneratorConfig& cfg,
                                        const Eigen::VectorXd& b_nominal) {
    return cfg.mode == RhsMode::TimeSeries ? sample_time_series(cfg, b_nominal)
                                           : sample_lhs(cfg, b_nominal);
}

}  // namespace pldc
