#include "insim/dynamics.hpp"

#include <cmath>

namespace insim {

OrbitParams OrbitParams::circular(double mu, double r0_mag, double j2,
                                  double earth_radius) {
    OrbitParams p{mu, r0_mag, mean_motion(mu, r0_mag), j2, earth_radius};
    p.validate();
    return p;
}

void OrbitParams::validate() const {
    if (!(mu > 0.0) || !(r0_mag > 0.0) || !(n > 0.0) || !(earth_radius > 0.0) ||
        !(j2 >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "OrbitParams: non-positive field");
    }
    const double resid = std::abs(n * n * r0_mag * r0_mag * r0_mag - mu) / mu;
    if (resid > 1e-12) {
        throw Error(ErrorCode::invalid_argument,
                    "OrbitParams: n^2 r0^3 != mu (rel resid " +
                        std::to_string(resid) + ")");
    }
}

double mean_motion(double mu, double r0_mag) {
    if (!(mu > 0.0) || !(r0_mag > 0.0)) {
        throw Error(ErrorCode::domain, "mean_motion: mu and r0 must be > 0");
    }
    return std::sqrt(mu / (r0_mag * r0_mag * r0_mag));
}

Mat3 cw_a_matrix(double n) {
    Mat3 a = Mat3::Zero();
    a(0, 0) = 3.0 * n * n;
    a(2, 2) = -n * n;
    return a;
}

Mat3 cw_b_matrix(double n) {
    Mat3 b = Mat3::Zero();
    b(0, 1) = 2.0 * n;
    b(1, 0) = -2.0 * n;
    return b;
}

Vec6 cw_derivative(const RelativeState& state, const Vec3& thrust, double n,
                   double mass) {
    if (!(mass > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "cw_derivative: mass must be > 0");
    }
    Vec6 dx;
    dx.head<3>() = state.vel;
    dx.tail<3>() =
        cw_a_matrix(n) * state.pos + cw_b_matrix(n) * state.vel + thrust / mass;
    return dx;
}

RelativeState cw_closed_form(const RelativeState& state0, double n, double t) {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "cw_closed_form: t must be >= 0");
    }
    const double nt = n * t;
    const double c = std::cos(nt);
    const double s = std::sin(nt);
    const double x0 = state0.pos.x(), y0 = state0.pos.y(), z0 = state0.pos.z();
    const double vx0 = state0.vel.x(), vy0 = state0.vel.y(),
                 vz0 = state0.vel.z();

    RelativeState out;
    out.pos.x() = (4.0 - 3.0 * c) * x0 + (s / n) * vx0 + (2.0 / n) * (1.0 - c) * vy0;
    out.pos.y() = 6.0 * (s - nt) * x0 + y0 + (2.0 / n) * (c - 1.0) * vx0 +
                  ((4.0 * s - 3.0 * nt) / n) * vy0;
    out.pos.z() = c * z0 + (s / n) * vz0;
    out.vel.x() = 3.0 * n * s * x0 + c * vx0 + 2.0 * s * vy0;
    out.vel.y() = 6.0 * n * (c - 1.0) * x0 - 2.0 * s * vx0 + (4.0 * c - 3.0) * vy0;
    out.vel.z() = -n * s * z0 + c * vz0;
    return out;
}

Vec3 two_body_j2_accel(const InertialState& state, const Vec3& external_force,
                       const OrbitParams& params, bool j2_enabled) {
    const double r = state.pos.norm();
    if (!(r > 0.0)) {
        throw Error(ErrorCode::domain, "two_body_j2_accel: zero radius");
    }
    Vec3 accel = -params.mu / (r * r * r) * state.pos;

    Vec3 perturbation = Vec3::Zero();
    if (j2_enabled) {
        const double x = state.pos.x(), y = state.pos.y(), z = state.pos.z();
        const double z2_over_r2 = (z * z) / (r * r);
        const double factor = -state.mass * params.j2 * 1.5 * params.mu /
                              (r * r * r * r * r) * params.earth_radius *
                              params.earth_radius;
        perturbation = factor * Vec3(x * (1.0 - 5.0 * z2_over_r2),
                                     y * (1.0 - 5.0 * z2_over_r2),
                                     z * (3.0 - 5.0 * z2_over_r2));
    }
    accel += (perturbation + external_force) / state.mass;
    return accel;
}

InertialState propagate_inertial(const InertialState& state,
                                 const Vec3& external_force,
                                 const OrbitParams& params, bool j2_enabled,
                                 double dt) {
    Vec6 x;
    x << state.pos, state.vel;
    InertialState probe = state;
    auto deriv = [&](double, const Vec6& s) {
        probe.pos = s.head<3>();
        probe.vel = s.tail<3>();
        Vec6 dx;
        dx.head<3>() = probe.vel;
        dx.tail<3>() = two_body_j2_accel(probe, external_force, params, j2_enabled);
        return dx;
    };
    const Vec6 next = rk4_step(deriv, x, 0.0, dt);
    return InertialState{next.head<3>(), next.tail<3>(), state.mass};
}

Mat3 hill_rotation(const InertialState& chief, bool radial_outward) {
    const double r = chief.pos.norm();
    const Vec3 h = chief.pos.cross(chief.vel);
    const double h_mag = h.norm();
    if (!(r > 0.0) || !(h_mag > 0.0)) {
        throw Error(ErrorCode::domain,
                    "hill_rotation: degenerate chief state (zero radius or "
                    "angular momentum)");
    }
    const Vec3 radial = chief.pos / r;
    const Vec3 i_hat = radial_outward ? radial : Vec3(-radial);
    const Vec3 k_hat = h / h_mag;
    const Vec3 j_hat = k_hat.cross(i_hat);

    Mat3 rot;
    rot.col(0) = i_hat;
    rot.col(1) = j_hat;
    rot.col(2) = k_hat;
    return rot;
}

RelativeState to_hill(const InertialState& deputy, const InertialState& chief,
                      bool radial_outward) {
    const Mat3 rot = hill_rotation(chief, radial_outward);
    const Vec3 omega = chief.pos.cross(chief.vel) / chief.pos.squaredNorm();
    const Vec3 dr = deputy.pos - chief.pos;
    const Vec3 dv = deputy.vel - chief.vel - omega.cross(dr);
    return RelativeState{rot.transpose() * dr, rot.transpose() * dv};
}

InertialState from_hill(const RelativeState& rel, const InertialState& chief,
                        double mass, bool radial_outward) {
    const Mat3 rot = hill_rotation(chief, radial_outward);
    const Vec3 omega = chief.pos.cross(chief.vel) / chief.pos.squaredNorm();
    const Vec3 dr = rot * rel.pos;
    const Vec3 dv = rot * rel.vel + omega.cross(dr);
    return InertialState{chief.pos + dr, chief.vel + dv, mass};
}

}  // namespace insim
