#include "insim/rta.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace insim {

namespace {

// Decision vector layout: z = (u[0..2], phi[0..S-1]). Each constraint row r
// becomes a_r' z >= b_r with a_r = (coeff, -e_slack), b_r = -offset.
struct Problem {
    int n_var;
    int n_slack;
    Eigen::VectorXd h_diag;      // Hessian diagonal (H = diag, all > 0)
    Eigen::VectorXd g;           // linear term
    Eigen::MatrixXd a;           // one constraint per row
    Eigen::VectorXd b;
};

Problem build_problem(const Vec3& nominal, const std::vector<ConstraintRow>& rows,
                      const RtaParams& params) {
    int n_slack = 0;
    for (const auto& row : rows) {
        if (row.slack_id < 0) {
            throw Error(ErrorCode::invalid_argument, "solve_relaxed_qp: negative slack id");
        }
        n_slack = std::max(n_slack, row.slack_id + 1);
    }
    Problem p;
    p.n_slack = n_slack;
    p.n_var = 3 + n_slack;
    p.h_diag = Eigen::VectorXd::Constant(p.n_var, 2.0 * params.gamma3);
    p.h_diag.head<3>().setConstant(2.0);
    p.g = Eigen::VectorXd::Zero(p.n_var);
    p.g.head<3>() = -2.0 * nominal;
    p.a = Eigen::MatrixXd::Zero(static_cast<int>(rows.size()), p.n_var);
    p.b = Eigen::VectorXd::Zero(static_cast<int>(rows.size()));
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        if (!rows[r].coeff.allFinite() || !std::isfinite(rows[r].offset)) {
            throw Error(ErrorCode::invalid_argument, "solve_relaxed_qp: non-finite row");
        }
        p.a.row(r).head<3>() = rows[r].coeff.transpose();
        p.a(r, 3 + rows[r].slack_id) = -1.0;
        p.b(r) = -rows[r].offset;
    }
    return p;
}

// Equality-constrained step: minimize 1/2 p'Hp + q'p s.t. a_w p = 0.
// Returns the step and the working-set multipliers via the Schur complement
// (H is diagonal positive definite, so H^-1 is exact).
void eqp_step(const Problem& prob, const std::vector<int>& working,
              const Eigen::VectorXd& q, Eigen::VectorXd& p_out,
              Eigen::VectorXd& lambda_out) {
    const Eigen::VectorXd h_inv = prob.h_diag.cwiseInverse();
    if (working.empty()) {
        p_out = -(h_inv.array() * q.array()).matrix();
        lambda_out.resize(0);
        return;
    }
    const int k = static_cast<int>(working.size());
    Eigen::MatrixXd a_w(k, prob.n_var);
    for (int i = 0; i < k; ++i) {
        a_w.row(i) = prob.a.row(working[i]);
    }
    const Eigen::MatrixXd a_w_hinv = a_w * h_inv.asDiagonal();
    const Eigen::MatrixXd schur = a_w_hinv * a_w.transpose();
    lambda_out = Eigen::LDLT<Eigen::MatrixXd>(schur).solve(a_w_hinv * q);
    p_out = (h_inv.array() * (a_w.transpose() * lambda_out - q).array()).matrix();
}

}  // namespace

void RtaParams::validate() const {
    const bool positive = r_c > 0.0 && v_c > 0.0 && a_c > 0.0 && gamma0 > 0.0 &&
                          gamma1 > 0.0 && gamma2 > 0.0 && gamma3 > 0.0 &&
                          mass > 0.0 && (u_c.array() > 0.0).all();
    if (!positive) {
        throw Error(ErrorCode::invalid_argument, "RtaParams: all fields must be > 0");
    }
}

QpSolution solve_relaxed_qp(const Vec3& nominal,
                            const std::vector<ConstraintRow>& rows,
                            const RtaParams& params) {
    if (!(params.gamma3 > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "solve_relaxed_qp: gamma3 must be > 0");
    }
    const Problem prob = build_problem(nominal, rows, params);
    const int m = static_cast<int>(rows.size());

    // Feasible start: u = nominal, each slack at the smallest row value it
    // must cover (never above zero, so an interior nominal keeps phi = 0).
    Eigen::VectorXd z = Eigen::VectorXd::Zero(prob.n_var);
    z.head<3>() = nominal;
    for (int r = 0; r < m; ++r) {
        const int s = 3 + rows[r].slack_id;
        z(s) = std::min(z(s), rows[r].value_at(nominal));
    }

    std::vector<int> working;
    std::vector<char> in_working(m, 0);
    Eigen::VectorXd p, lambda;

    QpSolution sol;
    const int max_iter = 50 + 10 * m;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const Eigen::VectorXd q = prob.h_diag.asDiagonal() * z + prob.g;
        eqp_step(prob, working, q, p, lambda);

        const double p_scale = 1e-11 * (1.0 + z.cwiseAbs().maxCoeff());
        if (p.cwiseAbs().maxCoeff() <= p_scale) {
            if (working.empty()) {
                break;
            }
            int drop = -1;
            double lambda_min = -1e-11 * (1.0 + q.cwiseAbs().maxCoeff());
            for (int i = 0; i < static_cast<int>(working.size()); ++i) {
                if (lambda(i) < lambda_min) {
                    lambda_min = lambda(i);
                    drop = i;
                }
            }
            if (drop < 0) {
                break;  // all multipliers nonnegative: optimal
            }
            in_working[working[drop]] = 0;
            working.erase(working.begin() + drop);
            continue;
        }

        // Step to the nearest blocking constraint, at most the full step.
        double alpha = 1.0;
        int blocking = -1;
        for (int r = 0; r < m; ++r) {
            if (in_working[r]) {
                continue;
            }
            const double dir = prob.a.row(r).dot(p);
            if (dir >= -1e-13) {
                continue;
            }
            const double gap = prob.a.row(r).dot(z) - prob.b(r);
            const double step = std::max(0.0, gap / (-dir));
            if (step < alpha) {
                alpha = step;
                blocking = r;
            }
        }
        z += alpha * p;
        if (blocking >= 0) {
            working.push_back(blocking);
            in_working[blocking] = 1;
        }
    }
    sol.status = (iter >= max_iter) ? QpStatus::max_iter : QpStatus::optimal;
    sol.iterations = iter;
    sol.u_star = z.head<3>();
    sol.phi_star = z.tail(prob.n_slack);

    // KKT residuals at the final iterate: stationarity, primal feasibility,
    // dual feasibility, complementarity.
    Eigen::VectorXd lambda_full = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < static_cast<int>(working.size()); ++i) {
        lambda_full(working[i]) = lambda.size() > i ? lambda(i) : 0.0;
    }
    Eigen::VectorXd stationarity = prob.h_diag.asDiagonal() * z + prob.g;
    double residual = 0.0;
    for (int r = 0; r < m; ++r) {
        stationarity -= lambda_full(r) * prob.a.row(r).transpose();
    }
    residual = stationarity.cwiseAbs().maxCoeff();
    for (int r = 0; r < m; ++r) {
        const double gap = prob.a.row(r).dot(z) - prob.b(r);
        residual = std::max(residual, -gap);                       // primal
        residual = std::max(residual, -lambda_full(r));            // dual
        residual = std::max(residual, std::abs(lambda_full(r) * gap));
        if (gap < kActivationThreshold) {
            sol.active_set.push_back(r);
        }
    }
    sol.kkt_residual = std::max(0.0, residual);
    sol.objective = (sol.u_star - nominal).squaredNorm() +
                    params.gamma3 * sol.phi_star.squaredNorm();
    return sol;
}

}  // namespace insim
