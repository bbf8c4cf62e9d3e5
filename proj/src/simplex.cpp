#include "pldc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace pldc {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kDegenTol = 1e-11;
constexpr int kRefactorInterval = 100;

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

double nonbasic_value(VarStatus s, double lo, double hi) {
    switch (s) {
        case VarStatus::AtLower: return lo;
        case VarStatus::AtUpper: return hi;
        default: return 0.0;
    }
}

// Revised simplex over the structural columns of A plus m artificial unit
// columns (indices n..n+m-1). The basis inverse is kept explicitly and
// refactorized from a dense LU every kRefactorInterval pivots.
class SimplexEngine {
public:
    SimplexEngine(const Eigen::MatrixXd& A, Eigen::VectorXd b, Eigen::VectorXd lower,
                  Eigen::VectorXd upper)
        : A_(A),
          b_(std::move(b)),
          m_(static_cast<int>(A.rows())),
          n_(static_cast<int>(A.cols())) {
        lower_.resize(n_ + m_);
        upper_.resize(n_ + m_);
        lower_.head(n_) = lower;
        upper_.head(n_) = upper;
        lower_.tail(m_).setZero();
        upper_.tail(m_).setConstant(kInf);
        art_sign_.setOnes(m_);
        status_.assign(n_ + m_, VarStatus::AtLower);
        row_of_.assign(n_ + m_, -1);
        basis_.resize(m_);
        cost_.setZero(n_ + m_);
    }

    // Crash basis of artificials covering the residual of the bound-snapped
    // nonbasic point.
    void init_artificial_basis() {
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lower_[j]))
                status_[j] = VarStatus::AtLower;
            else if (std::isfinite(upper_[j]))
                status_[j] = VarStatus::AtUpper;
            else
                status_[j] = VarStatus::Free;
        }
        Eigen::VectorXd r = residual();
        binv_.setZero(m_, m_);
        for (int i = 0; i < m_; ++i) {
            art_sign_[i] = (r[i] >= 0.0) ? 1.0 : -1.0;
            int j = n_ + i;
            basis_[i] = j;
            status_[j] = VarStatus::Basic;
            row_of_[j] = i;
            binv_(i, i) = art_sign_[i];
        }
        xb_ = r.cwiseAbs();
    }

    void init_given_basis(const std::vector<int>& basis) {
        if (static_cast<int>(basis.size()) != m_)
            throw DimensionMismatch("hint basis size != num_cons");
        for (int j : basis)
            if (j < 0 || j >= n_) throw DimensionMismatch("hint basis index out of range");
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lower_[j]))
                status_[j] = VarStatus::AtLower;
            else if (std::isfinite(upper_[j]))
                status_[j] = VarStatus::AtUpper;
            else
                status_[j] = VarStatus::Free;
        }
        // Artificials pinned at zero; never eligible.
        for (int i = 0; i < m_; ++i) {
            lower_[n_ + i] = upper_[n_ + i] = 0.0;
            status_[n_ + i] = VarStatus::AtLower;
        }
        basis_ = basis;
        for (int i = 0; i < m_; ++i) {
            status_[basis_[i]] = VarStatus::Basic;
            row_of_[basis_[i]] = i;
        }
        factorize();
        compute_xb();
    }

    void set_phase1_cost() {
        cost_.setZero();
        cost_.tail(m_).setOnes();
    }

    void set_cost(const Eigen::VectorXd& c) {
        cost_.setZero();
        cost_.head(n_) = c;
    }

    void fix_artificials() {
        for (int i = 0; i < m_; ++i) {
            lower_[n_ + i] = 0.0;
            upper_[n_ + i] = 0.0;
        }
    }

    double phase_objective() const {
        double v = 0.0;
        for (int i = 0; i < m_; ++i) v += cost_[basis_[i]] * xb_[i];
        for (int j = 0; j < n_ + m_; ++j)
            if (status_[j] != VarStatus::Basic)
                v += cost_[j] * nonbasic_value(status_[j], lower_[j], upper_[j]);
        return v;
    }

    // Returns Optimal or Unbounded.
    LpStatus run_primal() {
        const long max_iter = 20000L + 500L * (m_ + n_);
        degenerate_run_ = 0;
        bland_ = false;
        for (long it = 0; it < max_iter; ++it) {
            Eigen::VectorXd y = binv_.transpose() * basic_cost();
            Eigen::VectorXd d = reduced_costs(y);
            int enter = -1, dir = 0;
            double best = kTolOpt;
            for (int j = 0; j < n_ + m_; ++j) {
                if (status_[j] == VarStatus::Basic || lower_[j] == upper_[j]) continue;
                double dj = d[j];
                int cand_dir = 0;
                if ((status_[j] == VarStatus::AtLower || status_[j] == VarStatus::Free) &&
                    dj < -kTolOpt)
                    cand_dir = +1;
                else if ((status_[j] == VarStatus::AtUpper || status_[j] == VarStatus::Free) &&
                         dj > kTolOpt)
                    cand_dir = -1;
                if (cand_dir == 0) continue;
                if (bland_) {
                    enter = j;
                    dir = cand_dir;
                    break;
                }
                if (std::abs(dj) > best) {
                    best = std::abs(dj);
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0) return LpStatus::Optimal;
            if (!pivot_in(enter, dir)) return LpStatus::Unbounded;
        }
        throw NumericalError("simplex iteration limit exceeded");
    }

    // Dual simplex from a dual-feasible basis; returns Optimal or Infeasible.
    LpStatus run_dual() {
        const long max_iter = 20000L + 500L * (m_ + n_);
        for (long it = 0; it < max_iter; ++it) {
            int row = -1;
            double worst = kTolFeas;
            bool below = false;
            for (int i = 0; i < m_; ++i) {
                int j = basis_[i];
                double viol_lo = lower_[j] - xb_[i];
                double viol_hi = xb_[i] - upper_[j];
                if (viol_lo > worst) {
                    worst = viol_lo;
                    row = i;
                    below = true;
                } else if (viol_hi > worst) {
                    worst = viol_hi;
                    row = i;
                    below = false;
                }
            }
            if (row < 0) return LpStatus::Optimal;

            Eigen::VectorXd y = binv_.transpose() * basic_cost();
            Eigen::VectorXd d = reduced_costs(y);
            Eigen::VectorXd alpha_struct = A_.transpose() * binv_.row(row).transpose();
            int enter = -1;
            double best_ratio = kInf;
            for (int j = 0; j < n_; ++j) {
                if (status_[j] == VarStatus::Basic || lower_[j] == upper_[j]) continue;
                double a = alpha_struct[j];
                if (std::abs(a) <= kPivotTol) continue;
                bool ok = false;
                if (status_[j] == VarStatus::Free)
                    ok = true;
                else if (below)
                    ok = (status_[j] == VarStatus::AtLower) ? (a < 0) : (a > 0);
                else
                    ok = (status_[j] == VarStatus::AtLower) ? (a > 0) : (a < 0);
                if (!ok) continue;
                double ratio = std::abs(d[j]) / std::abs(a);
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (enter < 0 || j < enter))) {
                    best_ratio = ratio;
                    enter = j;
                }
            }
            if (enter < 0) return LpStatus::Infeasible;
            replace_basis(row, enter, below ? VarStatus::AtLower : VarStatus::AtUpper);
            compute_xb();
        }
        throw NumericalError("dual simplex iteration limit exceeded");
    }

    LpSolution extract(const Eigen::VectorXd& c) const {
        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.x.setZero(n_);
        for (int j = 0; j < n_; ++j)
            if (status_[j] != VarStatus::Basic)
                sol.x[j] = nonbasic_value(status_[j], lower_[j], upper_[j]);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) sol.x[basis_[i]] = xb_[i];
        sol.objective = c.dot(sol.x);
        sol.duals = binv_.transpose() * basic_cost();
        sol.basis.reserve(m_);
        for (int i = 0; i < m_; ++i) sol.basis.push_back(basis_[i]);
        std::sort(sol.basis.begin(), sol.basis.end());
        sol.pivots = total_pivots_;
        return sol;
    }

    bool has_basic_artificial() const {
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_) return true;
        return false;
    }

    // Pivot remaining zero-valued artificials out of the basis. Requires A of
    // full row rank.
    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            Eigen::VectorXd rho = A_.transpose() * binv_.row(i).transpose();
            int enter = -1;
            double best = kPivotTol;
            for (int j = 0; j < n_; ++j) {
                if (status_[j] == VarStatus::Basic) continue;
                if (std::abs(rho[j]) > best) {
                    best = std::abs(rho[j]);
                    enter = j;
                }
            }
            if (enter < 0) throw NumericalError("cannot remove artificial from basis");
            replace_basis(i, enter, VarStatus::AtLower);
            compute_xb();
        }
    }

    const Eigen::VectorXd& xb() const { return xb_; }
    const std::vector<int>& basis_rows() const { return basis_; }

    bool basic_values_within_bounds(double tol) const {
        for (int i = 0; i < m_; ++i) {
            int j = basis_[i];
            if (xb_[i] < lower_[j] - tol || xb_[i] > upper_[j] + tol) return false;
        }
        return true;
    }

    bool duals_feasible(double tol) const {
        Eigen::VectorXd y = binv_.transpose() * basic_cost();
        Eigen::VectorXd d = reduced_costs(y);
        for (int j = 0; j < n_ + m_; ++j) {
            if (status_[j] == VarStatus::Basic || lower_[j] == upper_[j]) continue;
            if (status_[j] == VarStatus::AtLower && d[j] < -tol) return false;
            if (status_[j] == VarStatus::AtUpper && d[j] > tol) return false;
            if (status_[j] == VarStatus::Free && std::abs(d[j]) > tol) return false;
        }
        return true;
    }

private:
    Eigen::VectorXd basic_cost() const {
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
        return cb;
    }

    Eigen::VectorXd reduced_costs(const Eigen::VectorXd& y) const {
        Eigen::VectorXd d(n_ + m_);
        d.head(n_) = cost_.head(n_) - A_.transpose() * y;
        for (int i = 0; i < m_; ++i) d[n_ + i] = cost_[n_ + i] - art_sign_[i] * y[i];
        return d;
    }

    Eigen::VectorXd residual() const {
        Eigen::VectorXd r = b_;
        for (int j = 0; j < n_; ++j) {
            if (status_[j] == VarStatus::Basic) continue;
            double v = nonbasic_value(status_[j], lower_[j], upper_[j]);
            if (v != 0.0) r -= A_.col(j) * v;
        }
        // Nonbasic artificials sit at zero.
        return r;
    }

    void compute_xb() { xb_ = binv_ * residual(); }

    void factorize() {
        Eigen::MatrixXd B(m_, m_);
        for (int i = 0; i < m_; ++i) {
            int j = basis_[i];
            if (j < n_)
                B.col(i) = A_.col(j);
            else {
                B.col(i).setZero();
                B(j - n_, i) = art_sign_[j - n_];
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) throw NumericalError("singular basis factorization");
        binv_ = lu.inverse();
        pivots_since_refactor_ = 0;
    }

    Eigen::VectorXd ftran(int j) const {
        if (j < n_) return binv_ * A_.col(j);
        return binv_.col(j - n_) * art_sign_[j - n_];
    }

    // Ratio test and basis change for entering variable `enter` moving in
    // direction dir from its bound. Returns false when unbounded.
    bool pivot_in(int enter, int dir) {
        Eigen::VectorXd w = ftran(enter);
        double t_best = kInf;
        int leave_row = -1;
        bool leave_to_upper = false;
        for (int i = 0; i < m_; ++i) {
            double g = -dir * w[i];  // rate of change of xb_[i]
            int j = basis_[i];
            double room, to_upper;
            if (g > kPivotTol) {
                if (!std::isfinite(upper_[j])) continue;
                room = (upper_[j] - xb_[i]) / g;
                to_upper = true;
            } else if (g < -kPivotTol) {
                if (!std::isfinite(lower_[j])) continue;
                room = (xb_[i] - lower_[j]) / (-g);
                to_upper = false;
            } else {
                continue;
            }
            if (room < 0) room = 0;
            if (room < t_best - 1e-12 ||
                (room < t_best + 1e-12 && (leave_row < 0 || j < basis_[leave_row]))) {
                t_best = room;
                leave_row = i;
                leave_to_upper = to_upper;
            }
        }
        double t_flip = kInf;
        if (std::isfinite(lower_[enter]) && std::isfinite(upper_[enter]))
            t_flip = upper_[enter] - lower_[enter];

        if (!std::isfinite(t_best) && !std::isfinite(t_flip)) return false;

        if (t_flip <= t_best) {
            xb_ -= dir * t_flip * w;
            status_[enter] =
                (status_[enter] == VarStatus::AtLower) ? VarStatus::AtUpper : VarStatus::AtLower;
            note_pivot(t_flip);
            return true;
        }

        double enter_val = nonbasic_value(status_[enter], lower_[enter], upper_[enter]) +
                           dir * t_best;
        int leave_var = basis_[leave_row];
        xb_ -= dir * t_best * w;
        update_binv(leave_row, w);
        status_[leave_var] = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
        row_of_[leave_var] = -1;
        basis_[leave_row] = enter;
        status_[enter] = VarStatus::Basic;
        row_of_[enter] = leave_row;
        xb_[leave_row] = enter_val;
        note_pivot(t_best);
        if (pivots_since_refactor_ >= kRefactorInterval) {
            refactor_with_retry();
            compute_xb();
        }
        return true;
    }

    // Direct basis replacement used by dual simplex and artificial removal.
    void replace_basis(int row, int enter, VarStatus leave_status) {
        Eigen::VectorXd w = ftran(enter);
        if (std::abs(w[row]) <= kPivotTol) throw NumericalError("zero pivot in basis swap");
        int leave_var = basis_[row];
        update_binv(row, w);
        if (!std::isfinite(lower_[leave_var]) && !std::isfinite(upper_[leave_var]))
            status_[leave_var] = VarStatus::Free;
        else if (leave_status == VarStatus::AtUpper && std::isfinite(upper_[leave_var]))
            status_[leave_var] = VarStatus::AtUpper;
        else if (std::isfinite(lower_[leave_var]))
            status_[leave_var] = VarStatus::AtLower;
        else
            status_[leave_var] = VarStatus::AtUpper;
        row_of_[leave_var] = -1;
        basis_[row] = enter;
        status_[enter] = VarStatus::Basic;
        row_of_[enter] = row;
        note_pivot(0.0);
        if (pivots_since_refactor_ >= kRefactorInterval) refactor_with_retry();
    }

    void update_binv(int row, const Eigen::VectorXd& w) {
        double piv = w[row];
        if (std::abs(piv) <= kPivotTol) throw NumericalError("zero pivot element");
        binv_.row(row) /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            if (w[i] != 0.0) binv_.row(i) -= w[i] * binv_.row(row);
        }
        ++pivots_since_refactor_;
    }

    void refactor_with_retry() {
        try {
            factorize();
        } catch (const NumericalError&) {
            factorize();  // retry once; propagate on second failure
        }
    }

    void note_pivot(double step) {
        ++total_pivots_;
        if (step <= kDegenTol) {
            if (++degenerate_run_ > 50 * m_) bland_ = true;
        } else {
            degenerate_run_ = 0;
            bland_ = false;
        }
    }

    const Eigen::MatrixXd& A_;
    Eigen::VectorXd b_;
    int m_, n_;
    Eigen::VectorXd lower_, upper_, cost_, art_sign_;
    std::vector<int> basis_;
    std::vector<VarStatus> status_;
    std::vector<int> row_of_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    int pivots_since_refactor_ = 0;
    int total_pivots_ = 0;
    int degenerate_run_ = 0;
    bool bland_ = false;
};

LpSolution solve_with_rhs(const LinearProgram& lp, const Eigen::VectorXd& rhs) {
    SimplexEngine eng(lp.constraint_matrix(), rhs, lp.var_lower(), lp.var_upper());
    eng.set_phase1_cost();
    eng.init_artificial_basis();
    LpStatus s = eng.run_primal();
    (void)s;  // phase 1 is always bounded below by zero
    if (eng.phase_objective() > 1e-7 * (1.0 + rhs.cwiseAbs().sum())) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        return sol;
    }
    eng.drive_out_artificials();
    eng.fix_artificials();
    eng.set_cost(lp.objective());
    LpStatus s2 = eng.run_primal();
    if (s2 == LpStatus::Unbounded) {
        LpSolution sol;
        sol.status = LpStatus::Unbounded;
        return sol;
    }
    return eng.extract(lp.objective());
}

}  // namespace

LinearProgram::LinearProgram(Eigen::VectorXd objective, Eigen::MatrixXd constraint_matrix,
                             Eigen::VectorXd rhs, Eigen::VectorXd var_lower,
                             Eigen::VectorXd var_upper)
    : objective_(std::move(objective)), matrix_(std::move(constraint_matrix)), rhs_(std::move(rhs)) {
    const auto n = objective_.size();
    const auto m = rhs_.size();
    if (matrix_.rows() != m || matrix_.cols() != n)
        throw DimensionMismatch("constraint matrix shape mismatch");
    if (m > n) throw ConstructionError("more constraints than variables");
    lower_ = var_lower.size() ? std::move(var_lower) : Eigen::VectorXd::Zero(n);
    upper_ = var_upper.size() ? std::move(var_upper) : Eigen::VectorXd::Constant(n, kInf);
    if (lower_.size() != n || upper_.size() != n)
        throw DimensionMismatch("bound vector size mismatch");
    if (m > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(matrix_.transpose());
        qr.setThreshold(1e-10);
        if (qr.rank() < m) throw ConstructionError("constraint matrix is rank deficient");
    }
}

LpSolution solve_lp(const LinearProgram& lp) { return solve_with_rhs(lp, lp.rhs()); }

LpSolution resolve_with_rhs(const LinearProgram& lp, const Eigen::VectorXd& new_rhs,
                            const std::optional<std::vector<int>>& hint_basis) {
    if (new_rhs.size() != lp.num_cons()) throw DimensionMismatch("new_rhs size != num_cons");
    if (!hint_basis) return solve_with_rhs(lp, new_rhs);
    try {
        SimplexEngine eng(lp.constraint_matrix(), new_rhs, lp.var_lower(), lp.var_upper());
        eng.set_cost(lp.objective());
        eng.init_given_basis(*hint_basis);
        if (eng.basic_values_within_bounds(kTolFeas)) return eng.extract(lp.objective());
        if (!eng.duals_feasible(1e-7)) return solve_with_rhs(lp, new_rhs);
        LpStatus s = eng.run_dual();
        if (s == LpStatus::Infeasible) {
            LpSolution sol;
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        return eng.extract(lp.objective());
    } catch (const NumericalError&) {
        return solve_with_rhs(lp, new_rhs);
    }
}

std::optional<double> brute_force_optimum(const LinearProgram& lp, const Eigen::VectorXd& rhs) {
    const int m = lp.num_cons(), n = lp.num_vars();
    std::vector<int> comb(m);
    for (int i = 0; i < m; ++i) comb[i] = i;
    const Eigen::MatrixXd& A = lp.constraint_matrix();
    std::optional<double> best;
    auto advance = [&]() {
        int i = m - 1;
        while (i >= 0 && comb[i] == n - m + i) --i;
        if (i < 0) return false;
        ++comb[i];
        for (int k = i + 1; k < m; ++k) comb[k] = comb[k - 1] + 1;
        return true;
    };
    do {
        Eigen::MatrixXd B(m, m);
        for (int i = 0; i < m; ++i) B.col(i) = A.col(comb[i]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd xb = lu.solve(rhs);
        bool feas = true;
        for (int i = 0; i < m; ++i)
            if (xb[i] < -1e-9) { feas = false; break; }
        if (!feas) continue;
        double obj = 0.0;
        for (int i = 0; i < m; ++i) obj += lp.objective()[comb[i]] * xb[i];
        if (!best || obj < *best) best = obj;
    } while (advance());
    return best;
}

std::map<std::vector<double>, std::vector<int>> enumerate_optimal_bases(
    const LinearProgram& lp, const std::vector<Eigen::VectorXd>& rhs_list) {
    const int m = lp.num_cons(), n = lp.num_vars();
    // C(n, m) guard; intended for n <= 12.
    double count = 1.0;
    for (int i = 0; i < m; ++i) count *= double(n - i) / double(i + 1);
    if (count > 500000.0) throw TooLarge("basis enumeration guard exceeded");

    std::map<std::vector<double>, std::vector<int>> out;
    const Eigen::MatrixXd& A = lp.constraint_matrix();
    for (const auto& rhs : rhs_list) {
        if (rhs.size() != m) throw DimensionMismatch("rhs size != num_cons");
        std::vector<int> comb(m);
        for (int i = 0; i < m; ++i) comb[i] = i;
        auto advance = [&]() {
            int i = m - 1;
            while (i >= 0 && comb[i] == n - m + i) --i;
            if (i < 0) return false;
            ++comb[i];
            for (int k = i + 1; k < m; ++k) comb[k] = comb[k - 1] + 1;
            return true;
        };
        std::optional<double> best;
        std::vector<int> best_basis;
        do {
            Eigen::MatrixXd B(m, m);
            for (int i = 0; i < m; ++i) B.col(i) = A.col(comb[i]);
            Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
            lu.setThreshold(1e-10);
            if (!lu.isInvertible()) continue;
            Eigen::VectorXd xb = lu.solve(rhs);
            bool feas = true;
            for (int i = 0; i < m; ++i)
                if (xb[i] < -1e-9) { feas = false; break; }
            if (!feas) continue;
            double obj = 0.0;
            for (int i = 0; i < m; ++i) obj += lp.objective()[comb[i]] * xb[i];
            // Combinations come out in lexicographic order, so the first basis
            // hitting a strictly better objective is the canonical one.
            if (!best || obj < *best - 1e-9) {
                best = obj;
                best_basis = comb;
            }
        } while (advance());
        if (!best) throw InfeasibleRhs("rhs outside pos(A)");
        std::vector<double> key(rhs.data(), rhs.data() + rhs.size());
        out[key] = best_basis;
    }
    return out;
}

}  // namespace pldc
