#include "pldc/qp.hpp"

#include <algorithm>
#include <cmath>

namespace pldc {

namespace {
constexpr double kStepTol = 1e-10;
constexpr double kMultTol = 1e-9;
}  // namespace

QpResult solve_regularized_master(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b, const std::vector<Cut>& cuts,
                                  const Eigen::VectorXd& x_hat, double sigma_reg) {
    const int d = static_cast<int>(c.size());
    const int m = static_cast<int>(A.rows());
    const int ncuts = static_cast<int>(cuts.size());
    if (cuts.empty()) throw ValidationError("regularized master needs at least one cut");
    if (A.cols() != d || b.size() != m || x_hat.size() != d)
        throw DimensionMismatch("regularized master dimension mismatch");
    if ((A * x_hat - b).lpNorm<Eigen::Infinity>() > 1e-7 || x_hat.minCoeff() < -1e-9)
        throw ValidationError("incumbent is not first-stage feasible");
    if (sigma_reg <= 0.0) throw ValidationError("proximal weight must be positive");

    const int nw = d + 1;
    // Inequality i < d: x_i >= 0. Inequality d + r: eta - beta_r'x >= alpha_r.
    auto ineq_row = [&](int i) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nw);
        if (i < d) {
            a[i] = 1.0;
        } else {
            a.head(d) = -cuts[i - d].beta;
            a[d] = 1.0;
        }
        return a;
    };
    auto ineq_rhs = [&](int i) { return i < d ? 0.0 : cuts[i - d].alpha; };

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nw, nw);
    H.topLeftCorner(d, d) = sigma_reg * Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd g0(nw);
    g0.head(d) = c - sigma_reg * x_hat;
    g0[d] = 1.0;

    // Feasible start: the incumbent with eta at the cut envelope.
    Eigen::VectorXd w(nw);
    w.head(d) = x_hat;
    int best_cut = 0;
    double best_val = cuts[0].value_at(x_hat);
    for (int r = 1; r < ncuts; ++r) {
        double v = cuts[r].value_at(x_hat);
        if (v > best_val + 1e-15) {
            best_val = v;
            best_cut = r;
        }
    }
    w[d] = best_val;
    std::vector<int> working{d + best_cut};

    const int max_iter = 200 + 20 * (d + ncuts);
    for (int it = 0; it < max_iter; ++it) {
        const int nact = static_cast<int>(working.size());
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nw + m + nact, nw + m + nact);
        K.topLeftCorner(nw, nw) = H;
        K.block(nw, 0, m, d) = A;
        K.block(0, nw, d, m) = A.transpose();
        for (int i = 0; i < nact; ++i) {
            Eigen::VectorXd a = ineq_row(working[i]);
            K.block(nw + m + i, 0, 1, nw) = a.transpose();
            K.block(0, nw + m + i, nw, 1) = a;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nw + m + nact);
        rhs.head(nw) = -(H * w + g0);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
        if (!lu.isInvertible())
            throw NumericalError("degenerate working set in regularized master");
        Eigen::VectorXd sol = lu.solve(rhs);
        Eigen::VectorXd p = sol.head(nw);

        if (p.lpNorm<Eigen::Infinity>() <= kStepTol) {
            // Multiplier check; sign convention: grad f = A'mu + sum lambda_i a_i.
            int drop = -1;
            double most_negative = -kMultTol;
            int active_cuts = 0;
            for (int i = 0; i < nact; ++i)
                if (working[i] >= d) ++active_cuts;
            for (int i = 0; i < nact; ++i) {
                double lam = -sol[nw + m + i];
                bool is_cut = working[i] >= d;
                if (is_cut && active_cuts <= 1) continue;  // keep the last cut
                if (lam < most_negative) {
                    most_negative = lam;
                    drop = i;
                }
            }
            if (drop < 0) {
                QpResult res;
                res.x = w.head(d);
                res.eta = w[d];
                res.objective = c.dot(res.x) + res.eta +
                                0.5 * sigma_reg * (res.x - x_hat).squaredNorm();
                return res;
            }
            working.erase(working.begin() + drop);
            continue;
        }

        // Ratio test against inactive inequalities.
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < d + ncuts; ++i) {
            if (std::find(working.begin(), working.end(), i) != working.end()) continue;
            Eigen::VectorXd a = ineq_row(i);
            double ap = a.dot(p);
            if (ap >= -1e-12) continue;
            double slack = a.dot(w) - ineq_rhs(i);
            double step = std::max(slack, 0.0) / (-ap);
            if (step < alpha - 1e-15) {
                alpha = step;
                blocking = i;
            }
        }
        w += alpha * p;
        if (blocking >= 0) working.push_back(blocking);
    }
    throw NumericalError("regularized master did not converge");
}

}  // namespace pldc
