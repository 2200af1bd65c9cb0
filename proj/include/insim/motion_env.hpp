#pragma once

#include "insim/types.hpp"

#include <cstdint>

namespace insim {

inline double default_mean_motion() {
    return std::sqrt(kEarthMu / (kDefaultChiefRadius * kDefaultChiefRadius *
                                 kDefaultChiefRadius));
}

/// Scaling vector applied to initialization draws and bounds (x, y, z).
inline const Vec3 kAviaryScale{1.17, 2.5, 1.0};

/// Radius at which a goal or inspection point counts as reached, m.
inline constexpr double kReachRadius = 10.0;

struct LlObservation {
    Vec3 scaled_goal_offset{Vec3::Zero()};  ///< (pos - goal) / 1000
    Vec3 vel{Vec3::Zero()};                 ///< m/s
};

struct LlRewardWeights {
    double alpha{1.0};
    double beta{0.5};
    double nu{0.1};
    double speed_coeff{0.005};  ///< 1/s; speed limit is speed_coeff * distance
};

struct LlParams {
    double n{default_mean_motion()};
    double mass{1.0};          ///< kg
    double dt{1.0};            ///< s
    Vec3 u_c{Vec3::Ones()};    ///< per-axis thrust scale, N
    double init_range{240.0};  ///< m, pre-scaling uniform half-extent
    Vec3 scale{kAviaryScale};
    double bounds_factor{2.0};  ///< out-of-bounds box relative to init box
    double time_limit{500.0};   ///< s

    Vec3 bounds_half_extent() const {
        return bounds_factor * init_range * scale;
    }
};

enum class LlStatus { running, reached, out_of_bounds, timeout };

struct LlEpisode {
    RelativeState state;
    Vec3 goal{Vec3::Zero()};
    double t{0.0};
    LlStatus status{LlStatus::running};
};

struct LlStepResult {
    LlObservation obs;
    double reward{0.0};
    LlStatus status{LlStatus::running};
};

/// Draws start and goal positions componentwise-scaled from the uniform box,
/// zero initial velocity. Deterministic per seed.
LlEpisode ll_reset(std::uint64_t seed, const LlParams& params = {});

LlObservation ll_observe(const LlEpisode& ep);

/// Per-step reward: proximity + progress - conditional speed penalty.
double ll_reward(const Vec3& prev_pos, const LlEpisode& ep,
                 const LlRewardWeights& w);

/// Clips the action to the unit box, scales by u_c, integrates one RK4 step
/// and applies the termination rules (reached, out of bounds, timeout, in
/// that order). Throws Error(state) for a finished episode.
LlStepResult ll_step(LlEpisode& ep, const Vec3& action,
                     const LlRewardWeights& w, const LlParams& params);

struct WaypointGains {
    double k_p{0.02};  ///< 1/s^2
    double k_d{0.8};   ///< 1/s
};

/// Feedback-linearizing PD toward the goal: cancels the model drift terms and
/// closes the loop per axis. Returns an action in [-1, 1]^3 (units of u_c).
Vec3 baseline_waypoint_controller(const RelativeState& state, const Vec3& goal,
                                  double n, double mass,
                                  const WaypointGains& gains = {},
                                  const Vec3& u_c = Vec3::Ones());

}  // namespace insim
