#pragma once

#include "insim/types.hpp"

#include <vector>

namespace insim {

/// Safety-filter limits and gains. gamma0/gamma1 shape the pairwise distance
/// constraint, gamma2 the velocity constraint, gamma3 penalizes slack use.
struct RtaParams {
    double r_c{50.0};           ///< minimum separation, m
    double v_c{3.0};            ///< maximum relative speed, m/s
    double a_c{1.732};          ///< maximum relative acceleration, m/s^2
    Vec3 u_c{Vec3::Ones()};     ///< per-axis thrust bound, N
    double gamma0{0.1};
    double gamma1{0.1};
    double gamma2{0.5};
    double gamma3{1e3};
    double mass{1.0};           ///< kg

    void validate() const;
};

enum class ConstraintKind { position, velocity, acceleration, thrust };

/// One affine inequality in the control: coeff . u + offset >= slack[slack_id].
struct ConstraintRow {
    Vec3 coeff{Vec3::Zero()};
    double offset{0.0};
    int slack_id{0};
    ConstraintKind kind{ConstraintKind::position};
    int pair_index{-1};  ///< other agent for position rows (-1 = chief)
    int axis{-1};        ///< thrust rows
    int sign{0};         ///< thrust rows: +1 upper, -1 lower

    double value_at(const Vec3& u) const { return coeff.dot(u) + offset; }
};

enum class QpStatus { optimal, max_iter };

struct QpSolution {
    Vec3 u_star{Vec3::Zero()};
    Eigen::VectorXd phi_star;
    double kkt_residual{0.0};
    std::vector<int> active_set;  ///< rows with residual below the activation threshold
    QpStatus status{QpStatus::optimal};
    double objective{0.0};
    int iterations{0};
};

/// Residual below which a row counts as active in reports.
inline constexpr double kActivationThreshold = 1e-9;

/// Pairwise (or chief, when `other` is the zero state) distance-keeping
/// constraint. Second-order barrier on h = (|dr|^2 - r_c^2)/2 along the
/// relative trajectory; `other_accel` is the other agent's measured
/// acceleration from the previous step.
ConstraintRow position_constraint_row(const RelativeState& self,
                                      const RelativeState& other,
                                      const Vec3& other_accel,
                                      const RtaParams& params, double n,
                                      int slack_id, int pair_index = -1);

/// Speed-limit constraint: first-order barrier on b = (v_c^2 - |v|^2)/2.
ConstraintRow velocity_constraint_row(const RelativeState& state,
                                      const RtaParams& params, double n,
                                      int slack_id);

/// The acceleration bound row (measured acceleration against the model) plus
/// the six per-axis thrust-box rows. The thrust rows share one slack.
std::vector<ConstraintRow> accel_and_thrust_rows(const RelativeState& state,
                                                 const Vec3& measured_accel,
                                                 const RtaParams& params,
                                                 double n, int accel_slack_id,
                                                 int thrust_slack_id);

/// Solves min |u - nominal|^2 + gamma3 |phi|^2 subject to every row
/// coeff.u + offset >= phi[slack_id], slacks free in sign. Dense primal
/// active-set method; the problem is strictly convex so the minimizer is
/// unique and row order does not matter.
QpSolution solve_relaxed_qp(const Vec3& nominal,
                            const std::vector<ConstraintRow>& rows,
                            const RtaParams& params);

/// Immutable per-step view of every deputy used by the filter. The chief sits
/// at the Hill-frame origin and is implicit.
struct WorldSnapshot {
    std::vector<RelativeState> deputies;
    std::vector<Vec3> measured_accels;  ///< previous-step accelerations
};

/// Per-kind activity flags and slack magnitude for one filter invocation.
struct ActivationReport {
    bool position{false};
    bool velocity{false};
    bool acceleration{false};
    bool thrust{false};
    double slack_norm{0.0};
    QpStatus status{QpStatus::optimal};
    double kkt_residual{0.0};
};

struct FilterResult {
    Vec3 safe_thrust{Vec3::Zero()};
    ActivationReport report;
};

/// Assembles all constraint rows for one agent against the snapshot (every
/// other deputy, the chief, velocity, acceleration, thrust box) and solves
/// the relaxed QP for the minimally modified thrust.
FilterResult rta_filter(int agent_id, const Vec3& nominal,
                        const WorldSnapshot& world, const RtaParams& params,
                        double n);

}  // namespace insim
