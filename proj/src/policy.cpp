#include "pldc/policy.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "pldc/simplex.hpp"

namespace pldc {

namespace {

// An empty bundle is allowed: it selects deterministic-LP mode, where the
// consolidated master degenerates to the plain first-stage LP and eta is the
// LP value.
void check_dataset(const TrainingDataset& ds) {
    if (ds.points.empty()) throw ValidationError("training dataset is empty");
    const auto m1 = ds.points.front().b.size();
    const auto dx = ds.points.front().x_star.size();
    for (const auto& p : ds.points)
        if (p.b.size() != m1 || p.x_star.size() != dx)
            throw DimensionMismatch("inconsistent training point dimensions");
    for (const auto& cut : ds.bundle)
        if (cut.beta.size() != dx) throw DimensionMismatch("cut dimension mismatch");
}

// Ordered constraint pairs (i, j). The anchored subset pins every point against
// every cell anchor in both directions, which forces the same within-cell
// equalities as the full n^2 set.
std::vector<std::pair<int, int>> make_pairs(int n, const std::vector<Cell>& cells,
                                            const std::vector<int>& cell_of, bool prune) {
    std::vector<std::pair<int, int>> pairs;
    if (!prune) {
        pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) pairs.emplace_back(i, j);
        return pairs;
    }
    for (const auto& cell : cells)
        for (int i = 0; i < n; ++i)
            if (i != cell.anchor) pairs.emplace_back(i, cell.anchor);
    for (int j = 0; j < n; ++j) {
        int a = cells[cell_of[j]].anchor;
        if (a != j) pairs.emplace_back(a, j);
    }
    return pairs;
}

struct RowProblem {
    Eigen::MatrixXd G;  // constraints G w <= g over the split variables
    Eigen::VectorXd g;
    int L = 0, m1 = 0, n = 0;
    int width() const { return 4 * L * m1 + 2 * n; }
    int up(int l, int r) const { return l * m1 + r; }
    int um(int l, int r) const { return L * m1 + l * m1 + r; }
    int vp(int l, int r) const { return 2 * L * m1 + l * m1 + r; }
    int vm(int l, int r) const { return 3 * L * m1 + l * m1 + r; }
    int zp(int i) const { return 4 * L * m1 + i; }
    int zm(int i) const { return 4 * L * m1 + n + i; }
};

// Constraints of the training problem restricted to output row k. Row order:
// for each pair (i, j), the x-side inequality then the z-side inequality.
RowProblem build_row_problem(const std::vector<TrainingPoint>& points,
                             const std::vector<Eigen::VectorXd>& targets,
                             const std::vector<Cell>& cells, const std::vector<int>& cell_of,
                             const std::vector<std::pair<int, int>>& pairs, int k) {
    RowProblem rp;
    rp.L = static_cast<int>(cells.size());
    rp.n = static_cast<int>(points.size());
    rp.m1 = static_cast<int>(points.front().b.size());
    const int rows = 2 * static_cast<int>(pairs.size());
    rp.G = Eigen::MatrixXd::Zero(rows, rp.width());
    rp.g = Eigen::VectorXd::Zero(rows);
    int row = 0;
    for (const auto& [i, j] : pairs) {
        const int lj = cell_of[j];
        Eigen::VectorXd d = points[i].b - points[j].b;
        for (int r = 0; r < rp.m1; ++r) {
            rp.G(row, rp.up(lj, r)) = d[r];
            rp.G(row, rp.um(lj, r)) = -d[r];
            rp.G(row + 1, rp.vp(lj, r)) = d[r];
            rp.G(row + 1, rp.vm(lj, r)) = -d[r];
        }
        for (int rr = 0; rr < 2; ++rr) {
            rp.G(row + rr, rp.zp(j)) = 1.0;
            rp.G(row + rr, rp.zm(j)) = -1.0;
            rp.G(row + rr, rp.zp(i)) = -1.0;
            rp.G(row + rr, rp.zm(i)) = 1.0;
        }
        rp.g[row] = targets[i][k] - targets[j][k];
        rp.g[row + 1] = 0.0;
        row += 2;
    }
    return rp;
}

// Solve min 1'w s.t. G w <= g, w >= 0 through its dual
//   min g'lambda s.t. -G'lambda + t = 1, 0 <= lambda (<= slack_weight in
// relaxed mode), t >= 0,
// whose constraint duals recover the optimal w. An unbounded dual certifies an
// infeasible (plain-mode) training problem. Relaxed mode's lambda upper bound
// is exactly the penalized-slack primal.
Eigen::VectorXd solve_split_lp(const Eigen::MatrixXd& G, const Eigen::VectorXd& g,
                               const PolicyOptions& opts) {
    const int p = static_cast<int>(G.cols());
    const int q = static_cast<int>(G.rows());
    if (q == 0) return Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd M(p, q + p);
    M.leftCols(q) = -G.transpose();
    M.rightCols(p) = Eigen::MatrixXd::Identity(p, p);
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(q + p);
    obj.head(q) = g;
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(q + p);
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(q + p, kInf);
    if (opts.relaxed) upper.head(q).setConstant(opts.slack_weight);
    auto sol = solve_lp(LinearProgram(std::move(obj), std::move(M),
                                      Eigen::VectorXd::Ones(p), std::move(lower),
                                      std::move(upper)));
    if (sol.status == LpStatus::Unbounded)
        throw TrainingInfeasible("training problem infeasible (use relaxed mode)");
    if (sol.status != LpStatus::Optimal)
        throw NumericalError("training problem solve failed");
    return -sol.duals;
}

Eigen::VectorXd solve_row_problem(const RowProblem& rp, const PolicyOptions& opts) {
    return solve_split_lp(rp.G, rp.g, opts);
}

PLDCPolicy fit_with_cells(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                          const TrainingDataset& dataset, const std::vector<Cell>& cells,
                          const std::vector<Eigen::VectorXd>& targets,
                          const PolicyOptions& opts) {
    const int n = static_cast<int>(dataset.points.size());
    const int L = static_cast<int>(cells.size());
    const int m1 = static_cast<int>(dataset.points.front().b.size());
    const int K = static_cast<int>(targets.front().size());  // d_x + 1
    const int width = m1 + static_cast<int>(dataset.bundle.size());

    std::vector<int> cell_of(n, -1);
    for (int l = 0; l < L; ++l)
        for (int i : cells[l].members) cell_of[i] = l;
    auto pairs = make_pairs(n, cells, cell_of, opts.prune_pairs);
    if (2 * pairs.size() * static_cast<std::size_t>(K) > opts.max_constraints)
        throw TooLarge("training problem exceeds the constraint guard");

    PLDCPolicy policy;
    policy.c = c;
    policy.cells = cells;
    policy.bundle = dataset.bundle;
    policy.relaxed = opts.relaxed;
    for (const auto& cell : cells) {
        policy.anchor_b.push_back(dataset.points[cell.anchor].b);
        policy.anchor_xeta.push_back(targets[cell.anchor]);
    }
    policy.u.assign(L, Eigen::MatrixXd::Zero(K, width));
    policy.v.assign(L, Eigen::MatrixXd::Zero(K, width));
    policy.z.assign(n, Eigen::VectorXd::Zero(K));

    for (int k = 0; k < K; ++k) {
        RowProblem rp = build_row_problem(dataset.points, targets, cells, cell_of, pairs, k);
        Eigen::VectorXd w = solve_row_problem(rp, opts);
        for (int l = 0; l < L; ++l)
            for (int r = 0; r < m1; ++r) {
                policy.u[l](k, r) = w[rp.up(l, r)] - w[rp.um(l, r)];
                policy.v[l](k, r) = w[rp.vp(l, r)] - w[rp.vm(l, r)];
            }
        for (int i = 0; i < n; ++i) policy.z[i][k] = w[rp.zp(i)] - w[rp.zm(i)];
        // Record the worst constraint violation (relaxation slack in relaxed
        // mode, numerical noise otherwise).
        Eigen::VectorXd viol = rp.G * w - rp.g;
        double worst = viol.size() ? viol.maxCoeff() : 0.0;
        policy.max_train_slack = std::max(policy.max_train_slack, worst);
    }

    double rec = 0.0;
    for (int i = 0; i < n; ++i) {
        auto out = apply_policy(policy, dataset.points[i].b);
        Eigen::VectorXd got(K);
        got.head(K - 1) = out.x_hat;
        got[K - 1] = out.eta_hat;
        rec = std::max(rec, (got - targets[i]).lpNorm<Eigen::Infinity>());
    }
    policy.max_recovery_error = rec;
    return policy;
}

// Sensitivity of the canonical target (x, eta) with respect to b on one cell,
// read off the optimal basis: basic components move as rows of B^-1 restricted
// to the b-part of the right-hand side, nonbasic components stay at zero.
Eigen::MatrixXd cell_sensitivity(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                 const TrainingDataset& dataset, const Cell& cell) {
    const int dx = static_cast<int>(A.cols());
    const int m1 = static_cast<int>(A.rows());
    const bool deterministic = dataset.bundle.empty();
    const Eigen::VectorXd& b0 = dataset.points[cell.anchor].b;
    Eigen::MatrixXd cons = deterministic
                               ? A
                               : build_consolidated_master(c, A, dataset.bundle, b0)
                                     .constraint_matrix();
    const int m = static_cast<int>(cons.rows());
    if (static_cast<int>(cell.basis_key.size()) != m)
        throw ConfigError("compact training needs full basis keys (cell_key_xeta off)");
    Eigen::MatrixXd B(m, m);
    for (int p = 0; p < m; ++p) B.col(p) = cons.col(cell.basis_key[p]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) throw NumericalError("singular basis in cell sensitivity");
    Eigen::MatrixXd Binv = lu.inverse();

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(dx + 1, m1);
    for (int p = 0; p < m; ++p) {
        int var = cell.basis_key[p];
        if (deterministic) {
            D.row(var) += Binv.row(p).head(m1);
            D.row(dx) += c[var] * Binv.row(p).head(m1);  // eta tracks the objective
        } else if (var <= dx) {
            D.row(var) = Binv.row(p).head(m1);
        }
    }
    return D;
}

// Training with affine-per-cell shifts: one constraint row per (point, foreign
// cell) combining the x-side and z-side inequalities (identical left-hand
// sides, elementwise-min right-hand side). Variables per output row are the
// split v slopes and anchor shifts only.
PLDCPolicy fit_compact(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const TrainingDataset& dataset, const std::vector<Cell>& cells,
                       const std::vector<Eigen::VectorXd>& targets, const PolicyOptions& opts) {
    const int n = static_cast<int>(dataset.points.size());
    const int L = static_cast<int>(cells.size());
    const int m1 = static_cast<int>(dataset.points.front().b.size());
    const int K = static_cast<int>(targets.front().size());
    const int width = m1 + static_cast<int>(dataset.bundle.size());

    std::vector<int> cell_of(n, -1);
    for (int l = 0; l < L; ++l)
        for (int i : cells[l].members) cell_of[i] = l;
    std::vector<Eigen::MatrixXd> D;
    D.reserve(L);
    for (const auto& cell : cells) D.push_back(cell_sensitivity(c, A, dataset, cell));

    PLDCPolicy policy;
    policy.c = c;
    policy.cells = cells;
    policy.bundle = dataset.bundle;
    policy.relaxed = opts.relaxed;
    for (const auto& cell : cells) {
        policy.anchor_b.push_back(dataset.points[cell.anchor].b);
        policy.anchor_xeta.push_back(targets[cell.anchor]);
    }
    policy.u.assign(L, Eigen::MatrixXd::Zero(K, width));
    policy.v.assign(L, Eigen::MatrixXd::Zero(K, width));
    policy.z.assign(n, Eigen::VectorXd::Zero(K));

    // Within-cell affineness of the targets is what justifies the restriction;
    // surface violations (corrupted or non-canonical targets) immediately.
    double worst_affine = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = cell_of[i];
        Eigen::VectorXd pred = D[l] * (dataset.points[i].b - policy.anchor_b[l]) +
                               targets[cells[l].anchor];
        worst_affine = std::max(worst_affine,
                                (pred - targets[i]).lpNorm<Eigen::Infinity>());
    }
    if (worst_affine > opts.train_tol && !opts.relaxed)
        throw TrainingInfeasible("targets are not affine within cells (use relaxed mode)");
    policy.max_train_slack = worst_affine;

    const std::size_t rows_est =
        static_cast<std::size_t>(n) * (L > 0 ? L - 1 : 0) * static_cast<std::size_t>(K);
    if (rows_est > opts.max_constraints)
        throw TooLarge("training problem exceeds the constraint guard");

    const int nv = 2 * L * m1 + 2 * L;  // [v+ | v- | za+ | za-]
    auto vp = [&](int l, int r) { return l * m1 + r; };
    auto vm = [&](int l, int r) { return L * m1 + l * m1 + r; };
    auto zap = [&](int l) { return 2 * L * m1 + l; };
    auto zam = [&](int l) { return 2 * L * m1 + L + l; };

    const int R = n * (L - 1);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(std::max(R, 0), nv);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(std::max(R, 0));
    // The left-hand sides are row-independent; fill them once.
    {
        int row = 0;
        for (int i = 0; i < n; ++i) {
            const int li = cell_of[i];
            Eigen::VectorXd e = dataset.points[i].b - policy.anchor_b[li];
            for (int l = 0; l < L; ++l) {
                if (l == li) continue;
                Eigen::VectorXd d = dataset.points[i].b - policy.anchor_b[l];
                for (int r = 0; r < m1; ++r) {
                    G(row, vp(l, r)) = d[r];
                    G(row, vm(l, r)) = -d[r];
                    G(row, vp(li, r)) -= e[r];
                    G(row, vm(li, r)) += e[r];
                }
                G(row, zap(l)) = 1.0;
                G(row, zam(l)) = -1.0;
                G(row, zap(li)) -= 1.0;
                G(row, zam(li)) += 1.0;
                ++row;
            }
        }
    }

    for (int k = 0; k < K; ++k) {
        int row = 0;
        for (int i = 0; i < n; ++i) {
            const int li = cell_of[i];
            for (int l = 0; l < L; ++l) {
                if (l == li) continue;
                Eigen::VectorXd d = dataset.points[i].b - policy.anchor_b[l];
                double gx = targets[i][k] - policy.anchor_xeta[l][k] - D[l].row(k).dot(d);
                g[row] = std::min(0.0, gx);
                ++row;
            }
        }
        Eigen::VectorXd w = solve_split_lp(G, g, opts);
        for (int l = 0; l < L; ++l)
            for (int r = 0; r < m1; ++r) {
                double vlr = w[vp(l, r)] - w[vm(l, r)];
                policy.v[l](k, r) = vlr;
                policy.u[l](k, r) = D[l](k, r) + vlr;
            }
        for (int i = 0; i < n; ++i) {
            const int li = cell_of[i];
            Eigen::VectorXd e = dataset.points[i].b - policy.anchor_b[li];
            double za = w[zap(li)] - w[zam(li)];
            policy.z[i][k] = policy.v[li].row(k).head(m1).dot(e) + za;
        }
        if (R > 0) {
            Eigen::VectorXd viol = G * w - g;
            policy.max_train_slack = std::max(policy.max_train_slack, viol.maxCoeff());
        }
    }

    double rec = 0.0;
    for (int i = 0; i < n; ++i) {
        auto out = apply_policy(policy, dataset.points[i].b);
        Eigen::VectorXd got(K);
        got.head(K - 1) = out.x_hat;
        got[K - 1] = out.eta_hat;
        rec = std::max(rec, (got - targets[i]).lpNorm<Eigen::Infinity>());
    }
    policy.max_recovery_error = rec;
    return policy;
}

std::vector<Eigen::VectorXd> raw_targets(const TrainingDataset& ds) {
    std::vector<Eigen::VectorXd> t;
    t.reserve(ds.points.size());
    for (const auto& p : ds.points) {
        Eigen::VectorXd v(p.x_star.size() + 1);
        v.head(p.x_star.size()) = p.x_star;
        v[p.x_star.size()] = p.eta_star;
        t.push_back(std::move(v));
    }
    return t;
}

}  // namespace

Eigen::VectorXd cm_rhs(const Eigen::VectorXd& b, const std::vector<Cut>& bundle) {
    Eigen::VectorXd rhs(b.size() + static_cast<Eigen::Index>(bundle.size()));
    rhs.head(b.size()) = b;
    for (std::size_t j = 0; j < bundle.size(); ++j) rhs[b.size() + j] = bundle[j].alpha;
    return rhs;
}

LinearProgram build_consolidated_master(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                        const std::vector<Cut>& bundle,
                                        const Eigen::VectorXd& b) {
    if (bundle.empty()) throw ValidationError("cut bundle is empty");
    const int m1 = static_cast<int>(A.rows());
    const int dx = static_cast<int>(A.cols());
    if (c.size() != dx || b.size() != m1) throw DimensionMismatch("CM dimension mismatch");
    const int J = static_cast<int>(bundle.size());
    const int nv = dx + 1 + J;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m1 + J, nv);
    M.topLeftCorner(m1, dx) = A;
    for (int j = 0; j < J; ++j) {
        if (bundle[j].beta.size() != dx) throw DimensionMismatch("cut dimension mismatch");
        M.row(m1 + j).head(dx) = -bundle[j].beta.transpose();
        M(m1 + j, dx) = 1.0;
        M(m1 + j, dx + 1 + j) = -1.0;
    }
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
    obj.head(dx) = c;
    obj[dx] = 1.0;
    Eigen::VectorXd lower = Eigen::VectorXd::Zero(nv);
    lower[dx] = -kInf;  // eta is free
    Eigen::VectorXd upper = Eigen::VectorXd::Constant(nv, kInf);
    return LinearProgram(std::move(obj), std::move(M), cm_rhs(b, bundle), std::move(lower),
                         std::move(upper));
}

CellAssignment assign_cells(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                            const TrainingDataset& dataset, bool cell_key_xeta) {
    check_dataset(dataset);
    const int dx = static_cast<int>(A.cols());
    const bool deterministic = dataset.bundle.empty();
    auto lp = deterministic
                  ? LinearProgram(c, A, dataset.points.front().b)
                  : build_consolidated_master(c, A, dataset.bundle, dataset.points.front().b);

    CellAssignment out;
    std::map<std::vector<int>, int> seen;
    std::optional<std::vector<int>> hint;
    for (int i = 0; i < static_cast<int>(dataset.points.size()); ++i) {
        auto sol = resolve_with_rhs(lp, cm_rhs(dataset.points[i].b, dataset.bundle), hint);
        if (sol.status != LpStatus::Optimal)
            throw CmInfeasible("consolidated master infeasible at a training rhs");
        hint = sol.basis;
        std::vector<int> key = sol.basis;
        if (cell_key_xeta) {
            key.clear();
            for (int idx : sol.basis)
                if (idx <= dx) key.push_back(idx);
        }
        auto [it, fresh] = seen.emplace(std::move(key), static_cast<int>(out.cells.size()));
        if (fresh) {
            Cell cell;
            cell.basis_key = it->first;
            cell.anchor = i;
            out.cells.push_back(std::move(cell));
        }
        out.cells[it->second].members.push_back(i);
        Eigen::VectorXd xeta(dx + 1);
        if (deterministic) {
            xeta.head(dx) = sol.x;
            xeta[dx] = sol.objective;
        } else {
            xeta = sol.x.head(dx + 1);
        }
        out.cm_xeta.push_back(std::move(xeta));
    }
    return out;
}

LinearProgram build_training_lp(const TrainingDataset& dataset, const std::vector<Cell>& cells,
                                const PolicyOptions& opts) {
    check_dataset(dataset);
    const int n = static_cast<int>(dataset.points.size());
    const int K = static_cast<int>(dataset.points.front().x_star.size()) + 1;
    std::vector<int> cell_of(n, -1);
    for (std::size_t l = 0; l < cells.size(); ++l)
        for (int i : cells[l].members) cell_of[i] = static_cast<int>(l);
    auto pairs = make_pairs(n, cells, cell_of, opts.prune_pairs);
    auto targets = raw_targets(dataset);

    const std::size_t rows_total = 2 * pairs.size() * static_cast<std::size_t>(K);
    if (rows_total > opts.max_constraints)
        throw TooLarge("training problem exceeds the constraint guard");

    // Assemble per-row blocks into one standard-form LP:
    // [G_0 .. G_{K-1} diag | -I (relaxed) | +I surplus].
    std::vector<RowProblem> rps;
    rps.reserve(K);
    for (int k = 0; k < K; ++k)
        rps.push_back(build_row_problem(dataset.points, targets, cells, cell_of, pairs, k));
    const int p = rps.front().width();
    const int R = static_cast<int>(rows_total);
    const int nv = K * p + (opts.relaxed ? R : 0) + R;
    if (static_cast<std::size_t>(R) * nv > 400'000'000)
        throw TooLarge("explicit training LP too large; use fit_policy");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(R, nv);
    Eigen::VectorXd rhs(R);
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
    obj.head(K * p).setOnes();
    int surplus0 = K * p + (opts.relaxed ? R : 0);
    for (int k = 0; k < K; ++k) {
        const int r0 = k * 2 * static_cast<int>(pairs.size());
        M.block(r0, k * p, rps[k].G.rows(), p) = rps[k].G;
        rhs.segment(r0, rps[k].g.size()) = rps[k].g;
    }
    for (int r = 0; r < R; ++r) {
        if (opts.relaxed) {
            M(r, K * p + r) = -1.0;
            obj[K * p + r] = opts.slack_weight;
        }
        M(r, surplus0 + r) = 1.0;
    }
    return LinearProgram(std::move(obj), std::move(M), std::move(rhs));
}

PLDCPolicy fit_policy(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                      const TrainingDataset& dataset, const PolicyOptions& opts) {
    check_dataset(dataset);
    if (opts.compact_z && opts.cell_key_xeta)
        throw ConfigError("compact training needs full basis keys (cell_key_xeta off)");
    auto assignment = assign_cells(c, A, dataset, opts.cell_key_xeta);
    auto targets = opts.canonicalize_targets ? assignment.cm_xeta : raw_targets(dataset);
    auto policy = opts.compact_z
                      ? fit_compact(c, A, dataset, assignment.cells, targets, opts)
                      : fit_with_cells(c, A, dataset, assignment.cells, targets, opts);
    policy.source = dataset.points.front().source == DataSource::SD ? "sd" : "lshaped";
    return policy;
}

PLDCPolicy fit_pointwise_baseline(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                  const TrainingDataset& dataset, const PolicyOptions& opts) {
    check_dataset(dataset);
    auto assignment = assign_cells(c, A, dataset, opts.cell_key_xeta);
    auto targets = opts.canonicalize_targets ? assignment.cm_xeta : raw_targets(dataset);
    std::vector<Cell> cells(dataset.points.size());
    for (int i = 0; i < static_cast<int>(dataset.points.size()); ++i) {
        cells[i].anchor = i;
        cells[i].members = {i};
        cells[i].basis_key = {i};  // synthetic key: one piece per point
    }
    auto policy = fit_with_cells(c, A, dataset, cells, targets, opts);
    policy.source = "pointwise";
    return policy;
}

PolicyOutput apply_policy(const PLDCPolicy& policy, const Eigen::VectorXd& b) {
    if (policy.cells.empty()) throw EmptyPolicy("policy has no cells");
    const int L = static_cast<int>(policy.cells.size());
    const int K = static_cast<int>(policy.anchor_xeta[0].size());
    const int m1 = static_cast<int>(policy.anchor_b[0].size());
    if (b.size() != m1) throw DimensionMismatch("rhs dimension mismatch");

    PolicyOutput out;
    out.x_hat = Eigen::VectorXd::Zero(K - 1);
    for (int k = 0; k < K; ++k) {
        double upper = -kInf, lowerpart = -kInf;
        for (int l = 0; l < L; ++l) {
            Eigen::VectorXd d = b - policy.anchor_b[l];
            double zk = policy.z[policy.cells[l].anchor][k];
            double uval = policy.u[l].row(k).head(m1).dot(d) + policy.anchor_xeta[l][k] + zk;
            double vval = policy.v[l].row(k).head(m1).dot(d) + zk;
            upper = std::max(upper, uval);
            lowerpart = std::max(lowerpart, vval);
        }
        double val = upper - lowerpart;
        if (k < K - 1)
            out.x_hat[k] = val;
        else
            out.eta_hat = val;
    }
    return out;
}

double corrected_objective(const PLDCPolicy& policy, const Eigen::VectorXd& x_hat) {
    if (policy.bundle.empty()) throw EmptyBundle("policy bundle is empty");
    double best = -kInf;
    for (const auto& cut : policy.bundle) best = std::max(best, cut.value_at(x_hat));
    return policy.c.dot(x_hat) + best;
}

// --- serialization --------------------------------------------------------

namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json mat_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vec_from(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

Eigen::MatrixXd mat_from(const json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    Eigen::MatrixXd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
    return M;
}

const char* kind_name(CutKind k) {
    switch (k) {
        case CutKind::Exact: return "exact";
        case CutKind::SdInSample: return "sd_in_sample";
        default: return "out_of_sample";
    }
}

CutKind kind_from(const std::string& s) {
    if (s == "exact") return CutKind::Exact;
    if (s == "sd_in_sample") return CutKind::SdInSample;
    if (s == "out_of_sample") return CutKind::OutOfSample;
    throw ParseError("unknown cut kind " + s);
}

}  // namespace

void save_policy(const PLDCPolicy& policy, const std::string& path) {
    json doc;
    doc["c"] = vec_json(policy.c);
    json cells = json::array();
    for (const auto& cell : policy.cells)
        cells.push_back({{"basis_key", cell.basis_key},
                         {"members", cell.members},
                         {"anchor", cell.anchor}});
    doc["cells"] = std::move(cells);
    json anchors = json::array();
    for (std::size_t l = 0; l < policy.anchor_b.size(); ++l)
        anchors.push_back(
            {{"b", vec_json(policy.anchor_b[l])}, {"xeta", vec_json(policy.anchor_xeta[l])}});
    doc["anchors"] = std::move(anchors);
    json u = json::array(), v = json::array(), z = json::array();
    for (const auto& m : policy.u) u.push_back(mat_json(m));
    for (const auto& m : policy.v) v.push_back(mat_json(m));
    for (const auto& m : policy.z) z.push_back(vec_json(m));
    doc["u"] = std::move(u);
    doc["v"] = std::move(v);
    doc["z"] = std::move(z);
    json bundle = json::array();
    for (const auto& cut : policy.bundle)
        bundle.push_back({{"alpha", cut.alpha},
                          {"beta", vec_json(cut.beta)},
                          {"kind", kind_name(cut.kind)},
                          {"solve_id", cut.solve_id},
                          {"iteration", cut.iteration}});
    doc["bundle"] = std::move(bundle);
    doc["metadata"] = {{"relaxed", policy.relaxed},
                       {"max_train_slack", policy.max_train_slack},
                       {"max_recovery_error", policy.max_recovery_error},
                       {"seed", policy.seed},
                       {"source", policy.source},
                       {"tolerances",
                        {{"feasibility", kPolicyFeasTol},
                         {"opt_gap_small", kOptGapSmall},
                         {"opt_gap_large", kOptGapLarge}}}};
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << doc.dump(1) << "\n";
}

PLDCPolicy load_policy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("policy parse failure: ") + e.what());
    }
    try {
        PLDCPolicy p;
        p.c = vec_from(doc.at("c"));
        for (const auto& jc : doc.at("cells")) {
            Cell cell;
            cell.basis_key = jc.at("basis_key").get<std::vector<int>>();
            cell.members = jc.at("members").get<std::vector<int>>();
            cell.anchor = jc.at("anchor").get<int>();
            p.cells.push_back(std::move(cell));
        }
        for (const auto& ja : doc.at("anchors")) {
            p.anchor_b.push_back(vec_from(ja.at("b")));
            p.anchor_xeta.push_back(vec_from(ja.at("xeta")));
        }
        for (const auto& jm : doc.at("u")) p.u.push_back(mat_from(jm));
        for (const auto& jm : doc.at("v")) p.v.push_back(mat_from(jm));
        for (const auto& jv : doc.at("z")) p.z.push_back(vec_from(jv));
        for (const auto& jb : doc.at("bundle")) {
            Cut cut;
            cut.alpha = jb.at("alpha").get<double>();
            cut.beta = vec_from(jb.at("beta"));
            cut.kind = kind_from(jb.at("kind").get<std::string>());
            cut.solve_id = jb.at("solve_id").get<int>();
            cut.iteration = jb.at("iteration").get<int>();
            p.bundle.push_back(std::move(cut));
        }
        const auto& md = doc.at("metadata");
        p.relaxed = md.at("relaxed").get<bool>();
        p.max_train_slack = md.at("max_train_slack").get<double>();
        p.max_recovery_error = md.at("max_recovery_error").get<double>();
        p.seed = md.at("seed").get<std::uint64_t>();
        p.source = md.at("source").get<std::string>();
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad policy schema: ") + e.what());
    }
}

}  // namespace pldc
