#include "insim/mission.hpp"

#include "insim/dynamics.hpp"
#include "insim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>

namespace insim {

MissionConfig MissionConfig::defaults() {
    MissionConfig config;
    config.initial_positions = {
        StartSpec::at({-202.7, 433.0, 172.2}),
        StartSpec::at({202.7, -433.0, 173.2}),
        StartSpec::at({202.7, 433.0, -173.2}),
    };
    return config;
}

void MissionConfig::validate() const {
    if (n_agents < 1) {
        throw Error(ErrorCode::invalid_argument, "config: n_agents must be >= 1");
    }
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "config: dt must be > 0");
    }
    if (!(time_cap >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "config: time_cap must be >= 0");
    }
    if (noise.actuation_latency_steps < 0) {
        throw Error(ErrorCode::invalid_argument, "config: latency must be >= 0");
    }
    if (!(noise.pos_noise_sigma >= 0.0) || !(noise.accel_noise_sigma >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "config: noise sigmas must be >= 0");
    }
    if (static_cast<int>(initial_positions.size()) != n_agents) {
        throw Error(ErrorCode::invalid_argument,
                    "config: initial_positions must list one entry per agent");
    }
    if (graph.count < 1) {
        throw Error(ErrorCode::invalid_argument, "config: graph count must be >= 1");
    }
    for (const auto& start : initial_positions) {
        if (start.from_graph && (start.index < 0 || start.index >= graph.count)) {
            throw Error(ErrorCode::invalid_argument,
                        "config: from_graph start index out of range");
        }
    }
    if (!(mass > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "config: mass must be > 0");
    }
    RtaParams effective = rta;
    effective.mass = mass;
    effective.validate();
    orbit.validate();
}

void apply_preset(MissionConfig& config, const std::string& name) {
    if (name == "exp1") {
        config.fidelity = Fidelity::hill;
        config.rta_enabled = false;
        config.noise = NoiseConfig{};
    } else if (name == "exp2") {
        config.fidelity = Fidelity::twobody_j2;
        config.rta_enabled = true;
        config.noise = NoiseConfig{};
    } else if (name == "cp-proxy") {
        config.fidelity = Fidelity::twobody_j2;
        config.rta_enabled = true;
        config.noise = NoiseConfig{0.5, 0.01, 2};
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown preset '" + name + "'");
    }
}

namespace {

int nearest_graph_index(const InspectionGraph& graph, const Vec3& pos) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int p = 0; p < graph.size(); ++p) {
        const double dist = (graph.points[p] - pos).norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = p;
        }
    }
    return best;
}

// Nearest unvisited point not already targeted by anyone; -1 when none left.
int greedy_assign(const InspectionGraph& graph,
                  const std::vector<std::uint8_t>& claimed, const Vec3& from) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int p = 0; p < graph.size(); ++p) {
        if (graph.visited[p] || claimed[p]) {
            continue;
        }
        const double dist = (graph.points[p] - from).norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = p;
        }
    }
    return best;
}

struct AgentRuntime {
    RelativeState hill;
    InertialState inertial;  // twobody fidelity only
    int target{-1};
    int graph_index{0};
    Vec3 measured_accel{Vec3::Zero()};
    Vec3 prev_vel{Vec3::Zero()};
    std::deque<Vec3> pending_thrust;
};

}  // namespace

MissionResult run_mission_from_config(const MissionConfig& config) {
    std::unique_ptr<MlpPolicy> hl, ll;
    if (!config.hl_policy_path.empty()) {
        hl = std::make_unique<MlpPolicy>(load_policy(config.hl_policy_path));
    }
    if (!config.ll_policy_path.empty()) {
        ll = std::make_unique<MlpPolicy>(load_policy(config.ll_policy_path));
    }
    return run_mission(config, hl.get(), ll.get());
}

MissionResult run_mission(const MissionConfig& config, const MlpPolicy* hl_policy,
                          const MlpPolicy* ll_policy) {
    config.validate();
    const int n_agents = config.n_agents;
    const double dt = config.dt;
    const double n = config.orbit.n;
    RtaParams rta = config.rta;
    rta.mass = config.mass;

    GraphParams graph_params = config.graph;
    if (config.graph_seed_from_mission) {
        graph_params.seed = substream_seed(config.seed, 1);
    }
    InspectionGraph graph = build_graph(graph_params);
    Rng noise_rng(substream_seed(config.seed, 2));

    if (hl_policy) {
        if (hl_policy->head != PolicyHead::discrete_argmax_per_agent ||
            hl_policy->head_agents != n_agents ||
            hl_policy->head_points != graph.size() ||
            hl_policy->input_dim() != n_agents + graph.size()) {
            throw Error(ErrorCode::invalid_argument,
                        "run_mission: guidance policy dims do not match mission");
        }
    }
    if (ll_policy) {
        if (ll_policy->head != PolicyHead::continuous_clip ||
            ll_policy->input_dim() != 6) {
            throw Error(ErrorCode::invalid_argument,
                        "run_mission: motion policy dims do not match mission");
        }
    }

    InertialState chief{{config.orbit.r0_mag, 0.0, 0.0},
                        {0.0, std::sqrt(config.orbit.mu / config.orbit.r0_mag), 0.0},
                        config.mass};

    std::vector<AgentRuntime> agents(n_agents);
    MissionLog log;
    log.n_agents = n_agents;
    log.dt = dt;
    log.mass = config.mass;
    log.reached_sequence.assign(n_agents, {});
    for (int i = 0; i < n_agents; ++i) {
        const StartSpec& start = config.initial_positions[i];
        agents[i].hill.pos =
            start.from_graph ? graph.points[start.index] : start.position;
        agents[i].hill.vel = Vec3::Zero();
        agents[i].graph_index = start.from_graph
                                    ? start.index
                                    : nearest_graph_index(graph, agents[i].hill.pos);
        agents[i].prev_vel = agents[i].hill.vel;
        agents[i].pending_thrust.assign(
            static_cast<std::size_t>(config.noise.actuation_latency_steps),
            Vec3::Zero());
        if (config.fidelity == Fidelity::twobody_j2) {
            agents[i].inertial = from_hill(agents[i].hill, chief, config.mass,
                                           config.radial_outward);
        }
        log.start_positions.push_back(agents[i].hill.pos);
    }

    auto mark_visited = [&]() {
        for (int p = 0; p < graph.size(); ++p) {
            if (graph.visited[p]) {
                continue;
            }
            for (const auto& agent : agents) {
                if ((agent.hill.pos - graph.points[p]).norm() < kReachRadius) {
                    graph.visited[p] = 1;
                    break;
                }
            }
        }
    };
    mark_visited();

    auto record_samples = [&](double t, const std::vector<Vec3>& u_cmd,
                              const std::vector<Vec3>& u_applied,
                              const std::vector<ActivationReport>& reports) {
        for (int i = 0; i < n_agents; ++i) {
            StepRecord rec;
            rec.t = t;
            rec.agent_id = i;
            rec.pos = agents[i].hill.pos;
            rec.vel = agents[i].hill.vel;
            rec.u_cmd = u_cmd.empty() ? Vec3::Zero() : u_cmd[i];
            rec.u_applied = u_applied.empty() ? Vec3::Zero() : u_applied[i];
            if (!reports.empty()) {
                rec.rta_pos = reports[i].position;
                rec.rta_vel = reports[i].velocity;
                rec.rta_acc = reports[i].acceleration;
                rec.rta_thrust = reports[i].thrust;
                rec.slack_norm = reports[i].slack_norm;
            }
            rec.target_index = agents[i].target;
            log.steps.push_back(rec);
        }
    };

    auto note_arrival = [&](int agent_id, int point) {
        auto& seq = log.reached_sequence[agent_id];
        if (seq.empty() || seq.back() != point) {
            seq.push_back(point);
        }
    };

    // Arrival bookkeeping plus asynchronous replanning: an agent asks for a
    // new target only once it reaches its current one.
    auto replan = [&](double t) {
        std::vector<std::uint8_t> claimed(graph.size(), 0);
        for (const auto& agent : agents) {
            if (agent.target >= 0) {
                claimed[agent.target] = 1;
            }
        }
        std::vector<int> joint_from_policy;
        for (int i = 0; i < n_agents; ++i) {
            AgentRuntime& agent = agents[i];
            const bool arrived =
                agent.target >= 0 &&
                (agent.hill.pos - graph.points[agent.target]).norm() < kReachRadius;
            if (arrived) {
                note_arrival(i, agent.target);
                agent.graph_index = agent.target;
            }
            if (agent.target >= 0 && !arrived) {
                continue;
            }
            if (agent.target >= 0) {
                claimed[agent.target] = 0;
            }
            int next = -1;
            if (hl_policy) {
                if (joint_from_policy.empty()) {
                    Eigen::VectorXd obs(n_agents + graph.size());
                    for (int k = 0; k < n_agents; ++k) {
                        obs(k) = static_cast<double>(agents[k].graph_index);
                    }
                    for (int p = 0; p < graph.size(); ++p) {
                        obs(n_agents + p) = graph.visited[p] ? 1.0 : 0.0;
                    }
                    joint_from_policy = policy_act_discrete(*hl_policy, obs);
                }
                next = joint_from_policy[i];
            } else {
                next = greedy_assign(graph, claimed, agents[i].hill.pos);
                if (next < 0) {
                    next = agent.graph_index;  // hold at the current point
                }
            }
            if (next != agent.target) {
                log.events.push_back(GuidanceEvent{t, i, next});
            }
            agent.target = next;
            claimed[next] = 1;
        }
    };

    int step = 0;
    double t = 0.0;
    while (!graph.all_visited() && t < config.time_cap - 1e-9) {
        replan(t);

        // Immutable per-step snapshot shared by every agent's filter.
        WorldSnapshot snapshot;
        snapshot.deputies.reserve(n_agents);
        snapshot.measured_accels.reserve(n_agents);
        for (const auto& agent : agents) {
            snapshot.deputies.push_back(agent.hill);
            snapshot.measured_accels.push_back(agent.measured_accel);
        }

        std::vector<Vec3> u_cmd(n_agents), u_applied(n_agents);
        std::vector<ActivationReport> reports(n_agents);
        for (int i = 0; i < n_agents; ++i) {
            AgentRuntime& agent = agents[i];
            Vec3 observed_pos = agent.hill.pos;
            if (config.noise.pos_noise_sigma > 0.0) {
                for (int k = 0; k < 3; ++k) {
                    observed_pos(k) += noise_rng.normal(0.0, config.noise.pos_noise_sigma);
                }
            }
            const Vec3 goal = graph.points[agent.target];
            Vec3 action;
            if (ll_policy) {
                Eigen::VectorXd obs(6);
                obs.head<3>() = (observed_pos - goal) / 1000.0;
                obs.tail<3>() = agent.hill.vel;
                action = policy_act_continuous(*ll_policy, obs);
            } else {
                const RelativeState observed{observed_pos, agent.hill.vel};
                action = baseline_waypoint_controller(observed, goal, n, config.mass,
                                                      config.controller, rta.u_c);
            }
            u_cmd[i] = action.cwiseProduct(rta.u_c);

            Vec3 filtered = u_cmd[i];
            if (config.rta_enabled) {
                const FilterResult result = rta_filter(i, u_cmd[i], snapshot, rta, n);
                filtered = result.safe_thrust;
                reports[i] = result.report;
            }
            agent.pending_thrust.push_back(filtered);
            u_applied[i] = agent.pending_thrust.front();
            agent.pending_thrust.pop_front();
        }

        record_samples(t, u_cmd, u_applied, reports);

        std::vector<Vec3> accel_noise(n_agents, Vec3::Zero());
        if (config.noise.accel_noise_sigma > 0.0) {
            for (int i = 0; i < n_agents; ++i) {
                for (int k = 0; k < 3; ++k) {
                    accel_noise[i](k) =
                        noise_rng.normal(0.0, config.noise.accel_noise_sigma);
                }
            }
        }

        if (config.fidelity == Fidelity::hill) {
            for (int i = 0; i < n_agents; ++i) {
                AgentRuntime& agent = agents[i];
                const Vec3 thrust = u_applied[i];
                const Vec3 extra = accel_noise[i];
                auto deriv = [&](double, const Vec6& x) {
                    Vec6 dx = cw_derivative(RelativeState::from_vec6(x), thrust, n,
                                            config.mass);
                    dx.tail<3>() += extra;
                    return dx;
                };
                agent.hill =
                    RelativeState::from_vec6(rk4_step(deriv, agent.hill.as_vec6(), t, dt));
            }
        } else {
            // Thrust is resolved into ECI once per step and held constant.
            const Mat3 rot = hill_rotation(chief, config.radial_outward);
            for (int i = 0; i < n_agents; ++i) {
                AgentRuntime& agent = agents[i];
                const Vec3 force_eci =
                    rot * (u_applied[i] + config.mass * accel_noise[i]);
                agent.inertial =
                    propagate_inertial(agent.inertial, force_eci, config.orbit,
                                       true, dt);
            }
            chief = propagate_inertial(chief, Vec3::Zero(), config.orbit, true, dt);
            for (auto& agent : agents) {
                agent.hill = to_hill(agent.inertial, chief, config.radial_outward);
            }
        }

        for (auto& agent : agents) {
            agent.measured_accel = (agent.hill.vel - agent.prev_vel) / dt;
            agent.prev_vel = agent.hill.vel;
        }

        ++step;
        t = step * dt;
        mark_visited();
    }

    // Final arrivals, then the terminal sample (no thrust follows it).
    for (int i = 0; i < n_agents; ++i) {
        AgentRuntime& agent = agents[i];
        if (agent.target >= 0 &&
            (agent.hill.pos - graph.points[agent.target]).norm() < kReachRadius) {
            note_arrival(i, agent.target);
        }
    }
    record_samples(t, {}, {}, {});

    log.final_time = t;
    log.graph = graph;

    MissionResult result;
    result.metrics = compute_metrics(log, dt, config.mass);
    result.log = std::move(log);
    return result;
}

Metrics compute_metrics(const MissionLog& log, double dt, double mass) {
    if (log.steps.empty() || log.n_agents < 1) {
        throw Error(ErrorCode::invalid_argument, "compute_metrics: empty log");
    }
    if (!(mass > 0.0) || !(dt > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "compute_metrics: bad dt or mass");
    }
    Metrics m;
    m.targets_reached = log.graph.visited_count();
    m.time_taken = log.final_time;

    const int samples = log.samples();
    for (int a = 0; a < log.n_agents; ++a) {
        for (int k = 1; k < samples; ++k) {
            m.distance_traveled += (log.at(k, a).pos - log.at(k - 1, a).pos).norm();
        }
    }
    for (const auto& rec : log.steps) {
        m.delta_v += rec.u_applied.norm() / mass * dt;
    }
    const int tracked = std::min({log.n_agents,
                                  static_cast<int>(log.start_positions.size()),
                                  static_cast<int>(log.reached_sequence.size())});
    for (int a = 0; a < tracked; ++a) {
        Vec3 at = log.start_positions[a];
        for (int idx : log.reached_sequence[a]) {
            m.straight_line_distance += (log.graph.points[idx] - at).norm();
            at = log.graph.points[idx];
        }
    }
    return m;
}

}  // namespace insim
