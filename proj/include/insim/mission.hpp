#pragma once

#include "insim/guidance_env.hpp"
#include "insim/motion_env.hpp"
#include "insim/policy.hpp"
#include "insim/rta.hpp"
#include "insim/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace insim {

enum class Fidelity { hill, twobody_j2 };

/// Hardware-proxy disturbances: sensing noise on position observations,
/// process noise on acceleration, and a fixed actuation delay.
struct NoiseConfig {
    double pos_noise_sigma{0.0};    ///< m
    double accel_noise_sigma{0.0};  ///< m/s^2
    int actuation_latency_steps{0};
};

/// Agent start: explicit Hill coordinates or an inspection-graph index.
struct StartSpec {
    bool from_graph{false};
    int index{0};
    Vec3 position{Vec3::Zero()};

    static StartSpec at(const Vec3& p) { return StartSpec{false, 0, p}; }
    static StartSpec graph_point(int idx) { return StartSpec{true, idx, Vec3::Zero()}; }
};

struct MissionConfig {
    int n_agents{3};
    Fidelity fidelity{Fidelity::hill};
    bool rta_enabled{false};
    NoiseConfig noise;
    double dt{1.0};          ///< s
    double time_cap{5000.0}; ///< s
    std::uint64_t seed{0};
    double mass{1.0};        ///< kg, every deputy
    bool radial_outward{false};
    RtaParams rta;           ///< limits/gains; also supplies the action scale u_c
    LlRewardWeights ll_weights;
    HlRewardWeights hl_weights;
    WaypointGains controller;
    GraphParams graph;
    bool graph_seed_from_mission{true};  ///< derive graph.seed from `seed`
    std::vector<StartSpec> initial_positions;
    OrbitParams orbit{OrbitParams::circular(kEarthMu, kDefaultChiefRadius)};
    std::string hl_policy_path;  ///< empty: greedy baseline
    std::string ll_policy_path;  ///< empty: waypoint baseline

    void validate() const;
    static MissionConfig defaults();
};

/// exp1: linearized dynamics, no filter. exp2: inertial J2 dynamics with the
/// filter. cp-proxy: exp2 plus noise and actuation latency.
void apply_preset(MissionConfig& config, const std::string& name);

/// One log sample: agent state at time t and the thrust applied over the
/// following step (zero on the final sample).
struct StepRecord {
    double t{0.0};
    int agent_id{0};
    Vec3 pos{Vec3::Zero()};
    Vec3 vel{Vec3::Zero()};
    Vec3 u_cmd{Vec3::Zero()};      ///< commanded (pre-filter), N
    Vec3 u_applied{Vec3::Zero()};  ///< filtered and delayed, N
    bool rta_pos{false};
    bool rta_vel{false};
    bool rta_acc{false};
    bool rta_thrust{false};
    double slack_norm{0.0};
    int target_index{-1};
};

struct GuidanceEvent {
    double t{0.0};
    int agent_id{0};
    int point_index{0};
};

struct Metrics {
    int targets_reached{0};
    double time_taken{0.0};
    double distance_traveled{0.0};
    double straight_line_distance{0.0};
    double delta_v{0.0};
};

struct MissionLog {
    int n_agents{0};
    double dt{1.0};
    double mass{1.0};
    std::vector<StepRecord> steps;  ///< sample-major, agent-minor
    std::vector<GuidanceEvent> events;
    std::vector<Vec3> start_positions;
    std::vector<std::vector<int>> reached_sequence;  ///< per agent, in order
    InspectionGraph graph;  ///< final visited state
    double final_time{0.0};

    int samples() const {
        return n_agents > 0 ? static_cast<int>(steps.size()) / n_agents : 0;
    }
    const StepRecord& at(int sample, int agent) const {
        return steps[static_cast<std::size_t>(sample) * n_agents + agent];
    }
};

struct MissionResult {
    MissionLog log;
    Metrics metrics;
};

/// Runs the hierarchical mission loop: asynchronous high-level target
/// assignment feeding the low-level controller per agent, optional safety
/// filtering, dynamics at the configured fidelity, noise injection, full
/// logging. Null policies fall back to the deterministic baselines.
MissionResult run_mission(const MissionConfig& config,
                          const MlpPolicy* hl_policy = nullptr,
                          const MlpPolicy* ll_policy = nullptr);

/// Loads any policy files named in the config, then runs.
MissionResult run_mission_from_config(const MissionConfig& config);

/// Aggregates the paper-style metrics from a log. Throws on an empty log.
Metrics compute_metrics(const MissionLog& log, double dt, double mass);

}  // namespace insim
