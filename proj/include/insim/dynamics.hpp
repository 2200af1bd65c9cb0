#pragma once

#include "insim/types.hpp"

#include <cmath>
#include <utility>

namespace insim {

/// Mean motion of a circular orbit, sqrt(mu / r0^3).
double mean_motion(double mu, double r0_mag);

/// In-plane restoring matrix of the linearized relative dynamics:
/// diag(3n^2, 0, -n^2).
Mat3 cw_a_matrix(double n);

/// Coriolis coupling matrix of the linearized relative dynamics:
/// rows (0,2n,0), (-2n,0,0), (0,0,0).
Mat3 cw_b_matrix(double n);

/// Time derivative of the relative state under linearized dynamics with an
/// applied thrust force (N). Returns (vel, A*pos + B*vel + thrust/mass).
Vec6 cw_derivative(const RelativeState& state, const Vec3& thrust, double n,
                   double mass);

/// Exact unforced solution of the linearized relative motion via the
/// state-transition matrix. Serves as the integration oracle; runtime
/// propagation goes through rk4_step so forced and unforced paths share
/// one code path.
RelativeState cw_closed_form(const RelativeState& state0, double n, double t);

/// Classical fixed-step RK4 update. DerivFn: (double t, const State&) -> State
/// where State supports scaling and addition (Eigen fixed vectors).
/// Throws Error(state) if an intermediate evaluation turns non-finite.
template <typename State, typename DerivFn>
State rk4_step(DerivFn&& f, const State& x, double t, double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "rk4_step: dt must be > 0");
    }
    const State k1 = f(t, x);
    const State k2 = f(t + 0.5 * dt, State(x + 0.5 * dt * k1));
    const State k3 = f(t + 0.5 * dt, State(x + 0.5 * dt * k2));
    const State k4 = f(t + dt, State(x + dt * k3));
    State out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.allFinite()) {
        throw Error(ErrorCode::state, "rk4_step: non-finite state");
    }
    return out;
}

/// Point-mass gravity plus optional J2 perturbation plus external force,
/// as an acceleration (m/s^2) on the spacecraft.
Vec3 two_body_j2_accel(const InertialState& state, const Vec3& external_force,
                       const OrbitParams& params, bool j2_enabled);

/// One RK4 step of the inertial two-body(+J2) dynamics under a constant
/// external force over the step.
InertialState propagate_inertial(const InertialState& state,
                                 const Vec3& external_force,
                                 const OrbitParams& params, bool j2_enabled,
                                 double dt);

/// Rotation from Hill's frame to ECI; columns are the Hill axes resolved in
/// ECI. The first axis points from the chief toward Earth unless
/// radial_outward is set, the third axis follows the chief's orbital angular
/// momentum, and the second completes the right-handed triad.
Mat3 hill_rotation(const InertialState& chief, bool radial_outward = false);

/// Expresses a deputy's inertial state relative to the chief in Hill's frame.
/// The velocity transform removes the frame rotation rate.
RelativeState to_hill(const InertialState& deputy, const InertialState& chief,
                      bool radial_outward = false);

/// Inverse of to_hill; `mass` populates the resulting deputy state.
InertialState from_hill(const RelativeState& rel, const InertialState& chief,
                        double mass, bool radial_outward = false);

}  // namespace insim
