#include "insim/motion_env.hpp"

#include "insim/dynamics.hpp"
#include "insim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace insim {

LlEpisode ll_reset(std::uint64_t seed, const LlParams& params) {
    Rng rng(seed);
    Vec3 x, y;
    for (int k = 0; k < 3; ++k) {
        x(k) = rng.uniform(-params.init_range, params.init_range);
    }
    for (int k = 0; k < 3; ++k) {
        y(k) = rng.uniform(-params.init_range, params.init_range);
    }
    LlEpisode ep;
    ep.state.pos = params.scale.cwiseProduct(x);
    ep.state.vel = Vec3::Zero();
    ep.goal = params.scale.cwiseProduct(y);
    return ep;
}

LlObservation ll_observe(const LlEpisode& ep) {
    return LlObservation{(ep.state.pos - ep.goal) / 1000.0, ep.state.vel};
}

double ll_reward(const Vec3& prev_pos, const LlEpisode& ep,
                 const LlRewardWeights& w) {
    const double d = (ep.state.pos - ep.goal).norm();
    const double d_prev = (prev_pos - ep.goal).norm();
    double reward = w.alpha / (d + 1.0) + w.beta * (d_prev - d);
    if (ep.state.vel.norm() > w.speed_coeff * d) {
        reward -= w.nu * ep.state.vel.lpNorm<1>();
    }
    return reward;
}

LlStepResult ll_step(LlEpisode& ep, const Vec3& action,
                     const LlRewardWeights& w, const LlParams& params) {
    if (ep.status != LlStatus::running) {
        throw Error(ErrorCode::state, "ll_step: episode already finished");
    }
    const Vec3 clipped = action.cwiseMax(-1.0).cwiseMin(1.0);
    const Vec3 thrust = clipped.cwiseProduct(params.u_c);
    const Vec3 prev_pos = ep.state.pos;

    auto deriv = [&](double, const Vec6& x) {
        return cw_derivative(RelativeState::from_vec6(x), thrust, params.n,
                             params.mass);
    };
    ep.state = RelativeState::from_vec6(
        rk4_step(deriv, ep.state.as_vec6(), ep.t, params.dt));
    ep.t += params.dt;

    const double d = (ep.state.pos - ep.goal).norm();
    const Vec3 bounds = params.bounds_half_extent();
    if (d < kReachRadius) {
        ep.status = LlStatus::reached;
    } else if ((ep.state.pos.cwiseAbs().array() > bounds.array()).any()) {
        ep.status = LlStatus::out_of_bounds;
    } else if (ep.t >= params.time_limit) {
        ep.status = LlStatus::timeout;
    }

    return LlStepResult{ll_observe(ep), ll_reward(prev_pos, ep, w), ep.status};
}

Vec3 baseline_waypoint_controller(const RelativeState& state, const Vec3& goal,
                                  double n, double mass,
                                  const WaypointGains& gains, const Vec3& u_c) {
    const Vec3 u_raw =
        mass * (-cw_a_matrix(n) * state.pos - cw_b_matrix(n) * state.vel +
                gains.k_p * (goal - state.pos) - gains.k_d * state.vel);
    return u_raw.cwiseQuotient(u_c).cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace insim
