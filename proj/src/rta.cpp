#include "insim/rta.hpp"

#include "insim/dynamics.hpp"

#include <cmath>

namespace insim {

namespace {

// Model acceleration of a deputy, without the control term: A dr + B dv.
Vec3 drift_accel(const RelativeState& state, double n) {
    return cw_a_matrix(n) * state.pos + cw_b_matrix(n) * state.vel;
}

}  // namespace

ConstraintRow position_constraint_row(const RelativeState& self,
                                      const RelativeState& other,
                                      const Vec3& other_accel,
                                      const RtaParams& params, double n,
                                      int slack_id, int pair_index) {
    const Vec3 dr = self.pos - other.pos;
    const Vec3 dv = self.vel - other.vel;
    const double h = 0.5 * (dr.squaredNorm() - params.r_c * params.r_c);
    const double h_dot = dr.dot(dv);
    // h_ddot = |dv|^2 + dr.(x_i_ddot - x_j_ddot); the self acceleration is
    // modeled (A dr_i + B dv_i + u/m, linear in u), the other's is measured.
    const double h_ddot_no_u =
        dv.squaredNorm() + dr.dot(drift_accel(self, n) - other_accel);

    ConstraintRow row;
    row.kind = ConstraintKind::position;
    row.pair_index = pair_index;
    row.slack_id = slack_id;
    row.coeff = dr / params.mass;
    row.offset = h_ddot_no_u + (params.gamma1 + params.gamma0) * h_dot +
                 params.gamma1 * params.gamma0 * h;
    return row;
}

ConstraintRow velocity_constraint_row(const RelativeState& state,
                                      const RtaParams& params, double n,
                                      int slack_id) {
    const double b = 0.5 * (params.v_c * params.v_c - state.vel.squaredNorm());
    ConstraintRow row;
    row.kind = ConstraintKind::velocity;
    row.slack_id = slack_id;
    row.coeff = -state.vel / params.mass;
    row.offset = -state.vel.dot(drift_accel(state, n)) + params.gamma2 * b;
    return row;
}

std::vector<ConstraintRow> accel_and_thrust_rows(const RelativeState& state,
                                                 const Vec3& measured_accel,
                                                 const RtaParams& params,
                                                 double n, int accel_slack_id,
                                                 int thrust_slack_id) {
    std::vector<ConstraintRow> rows;
    rows.reserve(7);

    ConstraintRow accel_row;
    accel_row.kind = ConstraintKind::acceleration;
    accel_row.slack_id = accel_slack_id;
    accel_row.coeff = -measured_accel / params.mass;
    accel_row.offset =
        params.a_c * params.a_c - measured_accel.dot(drift_accel(state, n));
    rows.push_back(accel_row);

    // |u_k| <= u_c_k splits into two affine rows per axis, one shared slack.
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {+1, -1}) {
            ConstraintRow row;
            row.kind = ConstraintKind::thrust;
            row.slack_id = thrust_slack_id;
            row.axis = axis;
            row.sign = sign;
            row.coeff = Vec3::Zero();
            row.coeff(axis) = -static_cast<double>(sign);
            row.offset = params.u_c(axis);
            rows.push_back(row);
        }
    }
    return rows;
}

FilterResult rta_filter(int agent_id, const Vec3& nominal,
                        const WorldSnapshot& world, const RtaParams& params,
                        double n) {
    const int n_agents = static_cast<int>(world.deputies.size());
    if (agent_id < 0 || agent_id >= n_agents ||
        world.measured_accels.size() != world.deputies.size()) {
        throw Error(ErrorCode::invalid_argument, "rta_filter: bad snapshot");
    }
    const RelativeState& self = world.deputies[agent_id];

    std::vector<ConstraintRow> rows;
    int slack = 0;
    // Pairwise separation from every other deputy, each with its own slack.
    for (int j = 0; j < n_agents; ++j) {
        if (j == agent_id) {
            continue;
        }
        rows.push_back(position_constraint_row(
            self, world.deputies[j], world.measured_accels[j], params, n,
            slack++, j));
    }
    // The chief is the zero state with zero acceleration.
    rows.push_back(position_constraint_row(self, RelativeState{}, Vec3::Zero(),
                                           params, n, slack++, -1));
    rows.push_back(velocity_constraint_row(self, params, n, slack++));
    const int accel_slack = slack++;
    const int thrust_slack = slack++;
    const auto tail_rows =
        accel_and_thrust_rows(self, world.measured_accels[agent_id], params, n,
                              accel_slack, thrust_slack);
    rows.insert(rows.end(), tail_rows.begin(), tail_rows.end());

    const QpSolution sol = solve_relaxed_qp(nominal, rows, params);

    FilterResult result;
    result.safe_thrust = sol.u_star;
    result.report.status = sol.status;
    result.report.kkt_residual = sol.kkt_residual;
    result.report.slack_norm = sol.phi_star.norm();
    for (int r : sol.active_set) {
        switch (rows[r].kind) {
            case ConstraintKind::position: result.report.position = true; break;
            case ConstraintKind::velocity: result.report.velocity = true; break;
            case ConstraintKind::acceleration:
                result.report.acceleration = true;
                break;
            case ConstraintKind::thrust: result.report.thrust = true; break;
        }
    }
    return result;
}

}  // namespace insim
